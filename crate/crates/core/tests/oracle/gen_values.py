"""Regenerates the frozen reference values used by the test suite.

Requires mpmath. Every value is computed at 40 significant digits,
independently of the Rust implementation.
"""
from mpmath import mp, mpf, gamma, loggamma, log, quad, nsum, inf

mp.dps = 40

alpha, beta, p = mpf("0.1"), mpf("0.2"), mpf("1.1")
n_alpha = 1 - alpha + alpha / gamma(alpha)
phi, psi = (1 - alpha) / n_alpha, alpha / n_alpha
print("phi(0.1, paper)", phi)
print("psi(0.1, paper)", psi)

# log-gamma at the exact binary value of each input
for x in [0.001, 0.01, 0.1, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.2, 7.7, 10.0,
          15.3, 33.3, 100.0, 150.5, 199.9, 200.0]:
    print("lgamma", x, mp.nstr(loggamma(mpf(x)), 20, strip_zeros=False))


def mlf(k, l, z):
    return nsum(lambda j: z**j / gamma(k * j + l), [0, inf])


print("pE_{0.2,1}(-3), p=1.1", mlf(mpf("0.2"), 1, -3 * log(p)))
print("quadratic exact solution at t=1", phi + 2 * log(p) * psi / gamma(beta + 3))

b7 = mpf("0.7")
rl = quad(lambda s: (1 - s) ** (b7 - 1) * (s + 2) * s**2, [0, 1]) / (gamma(b7) * 3)
print("weighted RL, beta=0.7, w=t+2, g=t^2, t=1", rl)


def coeff_a(m, b):
    m = mpf(m)
    return m**b * (m + 1 + b) - (m + 1) ** (b + 1) if m > 0 else -1


def coeff_b(m, b):
    m = mpf(m)
    return (m + 1) ** b * (m + 2 + b) - (m**b * (m + 2 + 2 * b) if m > 0 else 0)


print("A(3, 0.2)", coeff_a(3, mpf("0.2")), "B(5, 0.7)", coeff_b(5, mpf("0.7")))

h, n, m2 = mpf("0.01"), 100, 2
rb = (log(p) * psi * h ** (beta + 2) / (4 * gamma(beta + 2))
      * (n + 1) * (n + 4 + 2 * beta) * ((n + 1) ** beta - beta * mpf(n) ** beta) * m2)
print("remainder bound, h=0.01, n=100, M2=2", rb)

# Gronwall, constant coefficient: alpha=0.2, beta=0.5, p=2, lambda=0.4, N=1, u=1, t-a=1
al, be, pp, lam = mpf("0.2"), mpf("0.5"), mpf(2), mpf("0.4")
ph, ps = 1 - al, al
x = log(pp) * lam * ps / (1 - lam * ph)
s_const = 1 + nsum(lambda k: x**k / gamma(k * be), [1, inf])
print("gronwall constant", s_const / (1 - lam * ph))

# Gronwall, variable coefficient: u = 1+s, v = s/10 on [0, 1]
t = mpf(1)
u = lambda s: 1 + s
v = lambda s: s / 10
ratio = log(pp) * ps * v(t) / (1 - ph * v(t))
total = u(t) / (1 - ph * v(t))
for k in range(1, 60):
    memory = quad(lambda s: u(s) * (t - s) ** (k * be - 1) / (1 - ph * v(s)), [0, t])
    term = ratio**k / gamma(k * be) * memory
    total += term
    if abs(term) < mpf(10) ** -30:
        break
print("gronwall series", total)
