"""Independent reference computations used only by the tests."""

import mpmath as mp


def mp_wavenumber(E, m, V, hbar=1):
    k = mp.sqrt(2 * mp.mpf(m) * (mp.mpf(E) - mp.mpf(V))) / hbar
    k = mp.mpc(k)
    if k.imag < 0 or (k.imag == 0 and k.real < 0):
        k = -k
    return k


def mp_transmission(regions, E, beta, hbar=1, dps=60):
    """Transmission through ``[(mass, potential, width), ...]`` (leads have width None).

    Naive product of 2x2 matrices in global coordinates at ``dps`` digits,
    with T taken as the ratio of ``Im(psi* psi')/m`` currents.
    """
    # global-coordinate exponentials span exp(+-kappa x); keep that many extra digits
    growth = sum(abs(complex(mp_wavenumber(E, m, V, hbar)).imag) * w for m, V, w in regions[1:-1])
    with mp.workdps(dps + int(2 * growth / 2.3)):
        beta = mp.mpf(beta)
        alpha = -(1 + beta) / 2
        ks = [mp_wavenumber(E, m, V, hbar) for m, V, _ in regions]
        xs = [mp.mpf(0)]
        for _, _, w in regions[1:-1]:
            xs.append(xs[-1] + mp.mpf(w))

        def basis(m, k, x):
            m = mp.mpf(m)
            ep, em = mp.exp(1j * k * x), mp.exp(-1j * k * x)
            return mp.matrix([[m**alpha * ep, m**alpha * em],
                              [m ** (alpha + beta) * 1j * k * ep,
                               -(m ** (alpha + beta)) * 1j * k * em]])

        total = mp.eye(2)
        for j, x in enumerate(xs):
            mL, mR = regions[j][0], regions[j + 1][0]
            total = total * (basis(mL, ks[j], x) ** -1) * basis(mR, ks[j + 1], x)
        A0 = total[0, 0]
        B0 = total[1, 0]
        kL, kR = ks[0], ks[-1]
        mL, mR = mp.mpf(regions[0][0]), mp.mpf(regions[-1][0])
        T = (kR.real / mR) / (kL.real / mL) / abs(A0) ** 2
        R = abs(B0 / A0) ** 2
        return T, R
