"""Regenerate ``ladderlab/kernels/_rs_coeffs.py``.

Riemann-Siegel remainder coefficients C0..C4 as polynomials in z = p - 1/2,
built from the power series of

    Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)

computed with mpmath at high working precision (the series division loses
roughly 0.6 digits per degree).

Usage: python scripts/gen_rs_coeffs.py > src/ladderlab/kernels/_rs_coeffs.py
"""
import mpmath as mp

mp.mp.dps = 160
DEG = 90  # degree in z, even


def psi_series(deg):
    nw = deg // 2 + 1
    two_pi = 2 * mp.pi
    a = mp.cos(5 * mp.pi / 8)
    b = mp.sin(5 * mp.pi / 8)
    # cos(2 pi w - 5pi/8) = a cos(2 pi w) + b sin(2 pi w), series in w
    num = []
    for j in range(nw):
        if j % 2 == 0:
            c = a * (-1) ** (j // 2) * two_pi ** j / mp.factorial(j)
        else:
            c = b * (-1) ** ((j - 1) // 2) * two_pi ** j / mp.factorial(j)
        num.append(c)
    den = [(-1) ** j * two_pi ** (2 * j) / mp.factorial(2 * j) for j in range(nw)]
    q = []
    for n in range(nw):
        s = num[n] - sum(den[k] * q[n - k] for k in range(1, n + 1))
        q.append(s / den[0])
    coeffs = [mp.mpf(0)] * (deg + 1)
    for j, c in enumerate(q):
        coeffs[2 * j] = -c
    return coeffs


def derivative(coeffs, m):
    return [coeffs[j] * mp.ff(j, m) for j in range(m, len(coeffs))]


def combine(terms, deg):
    out = [mp.mpf(0)] * (deg + 1)
    for weight, poly in terms:
        for j, c in enumerate(poly):
            out[j] += weight * c
    return out


def main():
    psi = psi_series(DEG)
    d = {m: derivative(psi, m) for m in range(13)}
    pi = mp.pi
    polys = [
        combine([(1, d[0])], DEG),
        combine([(-1 / (96 * pi ** 2), d[3])], DEG),
        combine([(1 / (64 * pi ** 2), d[2]), (1 / (18432 * pi ** 4), d[6])], DEG),
        combine([(-1 / (64 * pi ** 2), d[1]), (-1 / (3840 * pi ** 4), d[5]),
                 (-1 / (5308416 * pi ** 6), d[9])], DEG),
        combine([(1 / (128 * pi ** 2), d[0]), (mp.mpf(19) / (24576 * pi ** 4), d[4]),
                 (mp.mpf(11) / (5898240 * pi ** 6), d[8]),
                 (1 / (2038431744 * pi ** 8), d[12])], DEG),
    ]
    print('"""Riemann-Siegel correction polynomials C0..C4 in z = p - 1/2.')
    print()
    print("Generated by scripts/gen_rs_coeffs.py; do not edit by hand.")
    print('"""')
    print()
    for k, poly in enumerate(polys):
        # keep terms that matter on |z| <= 1/2
        last = max(j for j, c in enumerate(poly) if abs(c) * mp.mpf(0.5) ** j > mp.mpf(10) ** -22)
        vals = [mp.nstr(c, 20, min_fixed=0, max_fixed=0) if c != 0 else "0.0"
                for c in poly[: last + 1]]
        print(f"C{k} = (")
        for v in vals:
            print(f"    {v},")
        print(")")
        print()
    print("RS_COEFFS = (C0, C1, C2, C3, C4)")


if __name__ == "__main__":
    main()
