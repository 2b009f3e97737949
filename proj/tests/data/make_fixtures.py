"""Regenerates the CLI fixtures with plain Python, independent of the C++ code."""
import json
import math


def cantor(x, digits=40):
    value, weight = 0.0, 0.5
    for _ in range(digits):
        x *= 3.0
        d = math.floor(x)
        x -= d
        if d == 1:
            return value + weight
        if d == 2:
            value += weight
        weight *= 0.5
    return value


def cantor_sweep(path, levels=7):
    n = 3 ** levels
    with open(path, "w") as f:
        f.write("lambda,r,n,err_bound,status\n")
        f.write("# middle-thirds Cantor function at 3^7 cell midpoints\n")
        for i in range(n):
            x = (i + 0.5) / n
            f.write(f"{x:.12g},{cantor(x):.12g},10000,0.0002,converged\n")


def gaussian_field(path, sigma=0.08, K=24):
    # Transform of exp(-|x - c|^2 / (2 sigma^2)) at c = (1/2, 1/2), mean removed.
    entries = []
    for k1 in range(-K, K + 1):
        for k2 in range(-K, K + 1):
            if k1 == 0 and k2 == 0:
                continue
            amp = 2 * math.pi * sigma**2 * math.exp(-2 * math.pi**2 * sigma**2 * (k1 * k1 + k2 * k2))
            if amp < 1e-300:
                continue
            entries.append({"k1": k1, "k2": k2, "re": amp * (-1) ** (k1 + k2), "im": 0.0})
    with open(path, "w") as f:
        json.dump({"K": K, "basis": "periodic", "entries": entries}, f)
        f.write("\n")


if __name__ == "__main__":
    cantor_sweep("cantor_sweep.csv")
    gaussian_field("gaussian_bump.json")
