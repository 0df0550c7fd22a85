int f(int x) {
    g(x);
}
