"""Dense linear algebra over Z/p^k, enough for Gram matrices and class spaces."""
from __future__ import annotations


class SingularMatrixError(ArithmeticError):
    pass


def rank_mod_p(rows, p: int) -> int:
    m = [[x % p for x in row] for row in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [(x - c * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def inverse_mod(rows, p: int, k: int):
    """Inverse of a square matrix over Z/p^k; raises if it is singular mod p."""
    mod = p ** k
    n = len(rows)
    m = [[x % mod for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] % p), None)
        if piv is None:
            raise SingularMatrixError(f"no unit pivot in column {col}")
        m[col], m[piv] = m[piv], m[col]
        inv = pow(m[col][col], -1, mod)
        m[col] = [x * inv % mod for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                c = m[i][col]
                m[i] = [(x - c * y) % mod for x, y in zip(m[i], m[col])]
    return [row[n:] for row in m]


def matmul(a, b, mod: int):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % mod for col in bt] for row in a]


def vecmat(v, m, mod: int):
    """Row vector times matrix."""
    if not m:
        return []
    return [sum(x * row[j] for x, row in zip(v, m)) % mod for j in range(len(m[0]))]


def is_identity(m, mod: int) -> bool:
    return all((x - int(i == j)) % mod == 0 for i, row in enumerate(m) for j, x in enumerate(row))
