"""Two-point functions of the four supported field states, side by side.

Evaluates the correlator against separation for the vacuum, a thermal state
(beta = 50 ell), a Gaussian-sourced coherent state and a one-particle
wavepacket, illustrating where each state departs from the vacuum: thermal
enhancement at large separation, and lightcone-localised excess correlation
for the sourced states.
"""

from udwtomo import Event, FieldState, hadamard_point, phi0_coherent, F_oneparticle

O = Event(0.0, 0.0, 0.0, 0.0)


def main():
    vac = FieldState.vacuum()
    th = FieldState.thermal(50.0)
    print("thermal vs vacuum at equal time (beta = 50 ell):")
    print(f"{'s/ell':>6} {'vacuum':>12} {'thermal':>12} {'ratio':>7}")
    for s in (1.0, 5.0, 10.0, 20.0, 40.0):
        a = Event(0.0, s, 0.0, 0.0)
        v, t = hadamard_point(vac, a, O), hadamard_point(th, a, O)
        print(f"{s:6.1f} {v:12.5e} {t:12.5e} {t / v:7.3f}")

    print("\ncoherent state (delta = 1.5 ell): classical wave along a scan")
    print("from the anchor (t, x) = (6, -6) ell; the product phi0(a) phi0(b)")
    print("is the whole departure from the vacuum:")
    coh = FieldState.coherent(1.5)
    anchor = Event(6.0, -6.0, 0.0, 0.0)
    print(f"{'s/ell':>6} {'vacuum':>12} {'coherent':>12} {'phi0(b)':>12}")
    for s in (2.0, 6.0, 11.0, 12.0, 13.0, 18.0):
        b = Event(6.0, -6.0 + s, 0.0, 0.0)
        v, c = hadamard_point(vac, anchor, b), hadamard_point(coh, anchor, b)
        print(f"{s:6.1f} {v:12.5e} {c:12.5e} {phi0_coherent(1.5, b):12.5e}")

    print("\none-particle wavepacket (delta = 10 ell): excess correlation")
    print("peaks where the scan meets the wavepacket's lightcone (s ~ 120):")
    one = FieldState.one_particle(10.0)
    anchor = Event(-60.0, -60.0, 0.0, 0.0)
    print(f"{'s/ell':>6} {'vacuum':>12} {'one-particle':>13} {'|F(b)|':>10}")
    for s in (40.0, 80.0, 110.0, 120.0, 130.0):
        b = Event(-60.0, -60.0 + s, 0.0, 0.0)
        v, w = hadamard_point(vac, anchor, b), hadamard_point(one, anchor, b)
        print(f"{s:6.1f} {v:12.5e} {w:13.5e} {abs(F_oneparticle(10.0, b)):10.3e}")


if __name__ == "__main__":
    main()
