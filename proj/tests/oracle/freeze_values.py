"""Independent high-precision oracle for frozen test values.

Evaluates the (p,q) definitions directly with mpmath at 50 digits by brute
force series summation. The C++ tests assert against the numbers printed here.
"""
from mpmath import mp, mpf, sqrt, nsum, inf, exp

mp.dps = 50


def br(n, p, q):
    return (p**n - q**n) / (p - q)


def fact(n, p, q):
    out = mpf(1)
    for j in range(1, n + 1):
        out *= br(j, p, q)
    return out


def E(x, p, q, terms=4000):
    s = mpf(0)
    for k in range(terms):
        t = q**(k * (k - 1) // 2) * x**k / fact(k, p, q) if k < 200 else 0
        s += t
    return s


def weights(n, p, q, x, K=400):
    y = br(n, p, q) * x
    terms = []
    t = mpf(1)
    for k in range(K):
        if k > 0:
            t *= q**(k - 1) * y / br(k, p, q)
        terms.append(t)
    tot = sum(terms)
    return [w / tot for w in terms]


def node(n, p, q, k):
    return br(k, p, q) / (q**(k - 1) * br(n, p, q))


def S_mom(n, p, q, x, m):
    w = weights(n, p, q, x)
    return sum(wk * node(n, p, q, k)**m for k, wk in enumerate(w))


def K_mom(n, p, q, x, m):
    w = weights(n, p, q, x)
    s = mpf(0)
    for k, wk in enumerate(w):
        a = node(n, p, q, k)
        b = node(n, p, q, k + 1)
        s += wk * (b**(m + 1) - a**(m + 1)) / br(m + 1, p, q) * br(n, p, q) * (q / p)**k
    return s


P, Q = mpf('0.9'), mpf('0.8')
print('[5]_{.9,.8} =', br(5, P, Q))
print('[3]_{1,.5} =', br(3, 1, mpf('0.5')))
print('[3]!_{1,.5} =', fact(3, 1, mpf('0.5')))
print('cell k=1 n=5 node', node(5, P, Q, 1), 'upper', node(5, P, Q, 2))
print('cell int t k=0 n=5', (1 / br(5, P, Q))**2 / br(2, P, Q))
print('S(t^2) n5 x1 =', S_mom(5, P, Q, 1, 2))
print('K(t) n5 x1 =', K_mom(5, P, Q, 1, 1))
print('K(t^2) n5 x1 =', K_mom(5, P, Q, 1, 2))
c2 = K_mom(5, P, Q, 1, 2) - 2 * K_mom(5, P, Q, 1, 1) + 1
print('central2 n5 x1 =', c2)
print('delta5 =', sqrt(c2))
n5 = br(5, P, Q)
two = br(2, P, Q)
three = br(3, P, Q)
alpha = P / Q**3 - 2 / Q + 1
beta = (P + two) / (Q * three * n5) + 1 / (Q**2 * n5) - 2 / (two * n5)
gamma = 1 / (three * n5**2)
print('alpha beta gamma', alpha, beta, gamma)
print('delta6 =', c2 + (1 / (two * n5) + (1 - Q) / Q)**2)
p10, q10 = mpf(10) / 11, mpf(10) / 12
print('[10] along a=2 b=1 =', br(10, p10, q10))
Qh = mpf('0.5')
n5h = br(5, P, Qh)
print('S(t^3) direct n5 p.9 q.5 x1 =', S_mom(5, P, Qh, 1, 3))
print('S(t^3) printed =', P**3 / Qh**3 + (P**2 + 2 * P * Qh) / (Qh * n5h) + Qh**2 / n5h**2)
print('S(t^4) direct n5 p.9 q.5 x1 =', S_mom(5, P, Qh, 1, 4))
print('K(t^3) direct n5 p.9 q.8 x1 =', K_mom(5, P, Q, 1, 3))
print('K(t^4) direct n5 p.9 q.8 x1 =', K_mom(5, P, Q, 1, 4))
print('E_{1,.5}(1) =', E(mpf(1), 1, mpf('0.5')))
print('E_{.9,.8}(2.5) =', E(mpf('2.5'), P, Q))
