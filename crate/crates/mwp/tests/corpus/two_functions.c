int safe(int a, int b) {
    a = a + b;
}

int unsafe_growth(int r, int n) {
    while (n > 0) {
        r = r * r;
        n = n - 1;
    }
}
