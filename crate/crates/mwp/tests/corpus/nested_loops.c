int nested(int i, int j, int s) {
    while (i > 0) {
        j = i;
        while (j > 0) {
            s = s + 1;
            j = j - 1;
        }
        i = i - 1;
    }
}
