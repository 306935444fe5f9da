def cap():
    a = [1, 2, 3]
    s = 0
    for x in a:
        s += x
    f = 2
    g = 3
    return a
print(cap())
