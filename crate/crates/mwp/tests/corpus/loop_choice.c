/* The body diagonal reaches p only under alternative 2 of its single
 * derivation point; exactly that alternative must be excluded. */
int tick(int x) {
    while (x > 0) {
        x = x + 1;
    }
}
