def f(a):
    x, m, s = 0, 101, 0
    while x < len(a):
        s += a[x]
        if m > a[x]:
            m = a[x]
        x += 1
    print(s + "," + m)
