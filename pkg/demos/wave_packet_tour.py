"""Wave packets at scale d: decompose, rebuild, and watch each packet's
extension collapse onto a tube."""

import numpy as np

from modn.fourier import DUAL, GroupFunction
from modn.surfaces import paraboloid
from modn.wave_packets import (
    PacketIndex,
    Tube,
    decompose,
    khintchine_experiment,
    packet_extension_image,
    packet_image_deviation,
    reconstruct,
)


def main():
    N, d = 27, 9
    rng = np.random.default_rng(1)
    H = GroupFunction(rng.standard_normal(N) + 1j * rng.standard_normal(N), N, DUAL)
    coeffs = decompose(H, d)
    err = np.max(np.abs(reconstruct(coeffs, d, N).values - H.values))
    print(f"N={N}, d={d}: {coeffs.size} packet coefficients, reconstruction error {err:.1e}")

    idx = PacketIndex((4,), (1,), d, N)
    img = packet_extension_image(idx)
    tube = Tube(idx, paraboloid(2))
    print(f"packet theta=4, v=1: tube direction {tube.direction}, |T| = {tube.cardinality()} = N d")
    print(f"  |E psi| is {np.unique(np.round(np.abs(img.predicted), 12))} on/off the tube;"
          f" deviation from the extension {packet_image_deviation(idx):.1e}")

    rep = khintchine_experiment(3, 2)
    print(f"\nrandom signs over {rep.thetas} packets, {rep.patterns} patterns: "
          f"E|sum| >= 2^(-1/2) sqrt(#tubes) everywhere: {rep.min_slack >= 0} (slack {rep.min_slack:.4f})")


if __name__ == "__main__":
    main()
