a = [5, 6]
b, c = a
b += 1
b += c

for i in a:
    c += i
