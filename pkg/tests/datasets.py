"""Small hand-enumerated datasets shared by the selection, CLI and acceptance tests."""
from infodiv.selection import Dataset


def xor_dataset() -> Dataset:
    # every (X1, X2) combination twice; Y = X1 xor X2
    rows = [(str(a ^ b), str(a), str(b)) for a in (0, 1) for b in (0, 1)] * 2
    return Dataset(("Y", "X1", "X2"), rows)


def duplicate_dataset() -> Dataset:
    y = list("aabcbcca")
    return Dataset.from_columns({
        "Y": y,
        "N": list("pqpqpqpq"),
        "Ycopy": y,
        "M": list("uuvvuvvu"),
    })


def recoded_dataset() -> Dataset:
    # B is A with labels permuted; C is independent of A
    a = ["r", "g", "b", "r", "g", "b", "r", "g", "b"]
    perm = {"r": "2", "g": "0", "b": "1"}
    return Dataset.from_columns({
        "Y": list("xyxyyxxyx"),
        "A": a,
        "B": [perm[v] for v in a],
        "C": list("sssttt" + "uuu"),
    })


def independent_uniform_dataset() -> Dataset:
    rows = [(str(a), str(b)) for a in range(2) for b in range(2)]
    return Dataset(("U", "V"), rows)


def equal_information_dataset() -> Dataset:
    # X1 = Y; X2 = (Y, independent bit); both carry all of Y, X2 has the larger entropy
    rows = [("0", "a", "p0"), ("0", "a", "p1"), ("1", "b", "q0"), ("1", "b", "q1")]
    return Dataset(("Y", "X1", "X2"), rows)


def useless_refinement_dataset() -> Dataset:
    # Fine splits each Coarse category by a coin independent of Y
    rows = []
    for y, coarse in (("0", "lo"), ("0", "lo"), ("1", "hi"), ("0", "hi")):
        for coin in ("h", "t"):
            rows.append((y, coarse, coarse + coin))
    return Dataset(("Y", "Coarse", "Fine"), rows)


def informative_refinement_dataset() -> Dataset:
    # Fine = (Y, N) determines Y; Coarse is Y flipped when N = 0
    rows = []
    for y in (0, 1):
        for n in range(4):
            coarse = y if n > 0 else 1 - y
            rows.append((str(y), f"c{coarse}", f"f{y}{n}"))
    return Dataset(("Y", "Coarse", "Fine"), rows)


def equal_information_ladder(noise_levels=(1, 2, 3, 5)) -> list[Dataset]:
    """Datasets (Y, X) where X = (Y, noise with k levels): equal information, growing entropy."""
    out = []
    for k in noise_levels:
        rows = [(str(y), f"{y}-{n}") for y in range(3) for n in range(k)]
        out.append(Dataset(("Y", "X"), rows))
    return out
