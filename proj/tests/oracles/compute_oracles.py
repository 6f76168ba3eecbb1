"""High-precision reference values frozen into the C++ tests.

Everything here is computed from first principles with mpmath (series summed
at 60+ digits, integrals by mpmath's tanh-sinh at high working precision), so
the values are independent of the library's own evaluation paths.

Run:  python3 tests/oracles/compute_oracles.py
"""
from mpmath import mp, mpf, gamma, quad, exp, sqrt, pi, inf, beta, rf, sin, cos, nsum, factorial

mp.dps = 30


def kgamma(x, k):
    return k ** (x / k - 1) * gamma(x / k)


def kpoch(r, k, j):
    out = mpf(1)
    for i in range(j):
        out *= r + i * k
    return out


def ml(x, k, p, q, r, kdeformed, terms=400):
    """E_{k,p,q}^r(x), summed directly at the current working precision."""
    total = mpf(0)
    term_poch = mpf(1)
    fact = mpf(1)
    for j in range(terms):
        g = kgamma(p * j + q, k) if kdeformed else gamma(p * j + q)
        t = term_poch / g * x ** j / fact
        total += t
        if j > 10 and abs(t) < mpf(10) ** (-mp.dps) * max(abs(total), mpf(10) ** -30):
            break
        term_poch *= r + j * k
        fact *= j + 1
    return total


def ext_beta(s, t, v, k, p, q, r, kdeformed):
    f = lambda m: m ** (s / k - 1) * (1 - m) ** (t / k - 1) * ml(-v * m ** k * (1 - m) ** k, k, p, q, r, kdeformed)
    return quad(f, [0, mpf(1) / 2, 1]) / k


def show(name, value):
    print(f"{name} = {mp.nstr(value, 20)}")


with mp.workdps(80):
    show("ml(-0.25; k=2,p=q=r=1, kdeformed) [200-term partial sum]",
         sum(kpoch(1, 2, j) / kgamma(j + 1, 2) * mpf(-0.25) ** j / gamma(j + 1) for j in range(200)))

show("int_0^1 x^-.5 (1-x)^-.5 exp(-x(1-x))  [x = sin^2]",
     2 * quad(lambda th: exp(-sin(th) ** 2 * cos(th) ** 2), [0, pi / 2]))

with mp.workdps(50):
    show("ext_gamma(0.5; k=p=q=1, r=2)",
         quad(lambda m: m ** mpf(-0.5) * ml(-m, 1, 1, 1, 2, False, 600), [0, 1, 10, 40, 80]) +
         quad(lambda m: m ** mpf(-0.5) * (1 - m) * exp(-m), [80, inf]))
show("  closed form Gamma(.5) - Gamma(1.5)", gamma(0.5) - gamma(1.5))

show("ext_beta(1.5, 2.5, v=1; k=2, p=q=r=1, kdeformed)", ext_beta(mpf(1.5), mpf(2.5), 1, 2, 1, 1, 1, True))
show("ext_beta(2, 2, v=1; k=p=q=r=1)", ext_beta(2, 2, 1, 1, 1, 1, 1, False))
show("ext_beta(1, 1, v=1; k=p=q=r=1)", ext_beta(1, 1, 1, 1, 1, 1, 1, False))
show("ext_beta(2, 3, v=1; k=p=q=r=1)", ext_beta(2, 3, 1, 1, 1, 1, 1, False))
show("ext_beta(0.6, 2.5, v=2; k=0.5, p=1.5, q=0.75, r=1)", ext_beta(mpf('0.6'), mpf('2.5'), 2, mpf('0.5'), mpf('1.5'), mpf('0.75'), 1, False))
show("ext_beta(0.6, 2.5, v=2; k=0.5, p=1.5, q=0.75, r=1, kdeformed)", ext_beta(mpf('0.6'), mpf('2.5'), 2, mpf('0.5'), mpf('1.5'), mpf('0.75'), 1, True))

# Section-4 distribution at s=t=2, v=1, k=p=q=l=1.
B22 = ext_beta(2, 2, 1, 1, 1, 1, 1, False)
show("pdf(0.5; s=t=2, v=1)", mpf(0.25) * exp(-mpf(0.25) ** 1 * 1) / B22 if False else mpf(0.25) * exp(-mpf(1) / 16 * 0 - mpf(0.25)) / B22)
B23 = ext_beta(2, 3, 1, 1, 1, 1, 1, False)
show("cdf(0.3; s=2, t=3, v=1)",
     quad(lambda x: x * (1 - x) ** 2 * exp(-x * (1 - x)), [0, mpf('0.3')]) / B23)
show("mean(s=t=2, v=1)", ext_beta(3, 2, 1, 1, 1, 1, 1, False) / B22)
show("mgf(-2; s=t=2, v=1)", quad(lambda x: exp(-2 * x) * x * (1 - x) * exp(-x * (1 - x)), [0, 1]) / B22)

# Two-parameter representation adjudication at a=1, b=2, eta=2, zeta=3:
a, b, eta, zeta = mpf(1), mpf(2), mpf(2), mpf(3)
I = quad(lambda u: u ** (a - 1) * (1 - u) ** (b - 1) / (eta + (zeta - eta) * u) ** (a + b), [0, 1])
show("int u^{a-1}(1-u)^{b-1}/(eta+(zeta-eta)u)^{a+b}  (a=1,b=2,eta=2,zeta=3)", I)
show("  B(a,b) / (zeta^a eta^b)", beta(a, b) / (zeta ** a * eta ** b))
show("  B(a,b) / (eta^a zeta^b)", beta(a, b) / (eta ** a * zeta ** b))

# Extended gamma in the algebraic-decay regime: Mellin-Barnes closed form
# Gamma(g) Gamma(r - g) / (Gamma(r) Gamma(q - p g)) at k = 1, cross-checked by
# brute force on [0, 40] plus the closed-form remainder is left to the C++ tests.
for (g, p, q, r) in [(mpf('0.5'), mpf('0.75'), 1, mpf('1.5')), (mpf('0.25'), mpf('1.5'), mpf('0.75'), 1)]:
    closed = gamma(g) * gamma(r - g) / (gamma(r) * gamma(q - p * g))
    show(f"ext_gamma closed form g={g} p={p} q={q} r={r} (k=1)", closed)

# Large-argument reference: direct series at very high working precision.
with mp.workdps(700):
    x = mpf(-200); s = mpf(0); term_poch = mpf(1); j = 0
    while True:
        t = term_poch * x**j / (gamma(mpf('0.75') * j + 1) * factorial(j))
        s += t
        if j > 50 and abs(t) < mpf(10)**-60:
            break
        term_poch *= mpf('1.5') + j
        j += 1
    show("ml(-200; k=1, p=0.75, q=1, r=1.5) [direct, 700 digits]", s)

# Heavily cancelling series points (beyond the quad-precision oracle).
def ml_direct(x, k, p, q, r, kdeformed, dps):
    with mp.workdps(dps):
        x, k, p, q, r = mpf(x), mpf(k), mpf(p), mpf(q), mpf(r)
        G = (lambda a: k**(a / k - 1) * gamma(a / k)) if kdeformed else gamma
        s = mpf(0); j = 0
        while True:
            t = rf_k(r, k, j) * x**j / (G(p * j + q) * factorial(j))
            s += t
            if j > 20 and abs(t) < abs(s) * mpf(10)**-40:
                return s
            j += 1

def rf_k(r, k, j):
    out = mpf(1)
    for i in range(j):
        out *= r + i * k
    return out

for x in (-25, -50):
    show(f"ml({x}; k=1, p=0.75, q=1, r=1.5) [direct, 200 digits]", ml_direct(x, 1, 0.75, 1, 1.5, False, 200))

# Extended beta with k = 1/2 (square-root kernel argument).
def ext_beta_direct(s, t, v, k, p, q, r, kdeformed):
    s, t, k, p, q, r = (mpf(x) for x in (s, t, k, p, q, r))
    G = (lambda a: k**(a / k - 1) * gamma(a / k)) if kdeformed else gamma
    def E(x):
        acc = mpf(0); j = 0; po = mpf(1)
        while True:
            term = po * x**j / (G(p * j + q) * factorial(j)); acc += term
            if j > 5 and abs(term) < mpf(10)**-35:
                return acc
            po *= r + j * k; j += 1
    f = lambda m: m**(s / k - 1) * (1 - m)**(t / k - 1) * E(-v * (m * (1 - m))**k)
    return quad(f, [0, 0.5, 1]) / k

show("ext_beta(0.6, 1, v=2; k=0.5, p=0.75, q=1.5, r=1.5, kdeformed)",
     ext_beta_direct(0.6, 1, 2, 0.5, 0.75, 1.5, 1.5, True))
