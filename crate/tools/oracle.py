"""Independent numpy/scipy reference values for tests/derived_values.rs.

Run with `python3 tools/oracle.py`; every printed number is frozen into the
Rust test file and should be regenerated here if a fixture changes.
"""
import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog

np.set_printoptions(precision=17)

I2 = np.eye(2)
sx = np.array([[0, 1], [1, 0]], dtype=complex)
sy = np.array([[0, -1j], [1j, 0]])
sz = np.diag([1.0, -1.0]).astype(complex)


def commutant_dim(ops):
    d = ops[0].shape[0]
    blocks = [np.kron(A, np.eye(d)) - np.kron(np.eye(d), A.T) for A in ops]
    return null_space(np.vstack(blocks), rcond=1e-10).shape[1]


def smeared(t, s=sz):
    return [(I2 + t * s) / 2, (I2 - t * s) / 2]


def trine():
    out = []
    for k in range(3):
        a = 2 * np.pi * k / 3
        out.append((I2 + np.sin(a) * sx + np.cos(a) * sz) / 3)
    return out


print("eig sigma_x", np.linalg.eigh(sx))
H = np.array([[2, 1 - 1j, 0, 0.5j], [1 + 1j, 3, 1, 0], [0, 1, 1, -1j], [-0.5j, 0, 1j, 0]])
print("eig H", repr(np.linalg.eigvalsh(H)))

v = np.array([1, 1]) / np.sqrt(2)
w = np.array([1, -1]) / np.sqrt(2)
for vec in (v, w):
    print("joint", [np.real(vec.conj() @ A @ vec) for A in (sx, I2 - sx)])

print("nullspace [[1,1]]", null_space(np.array([[1.0, 1.0]])).T)
print("commutant sz", commutant_dim([sz]), "sz,sx", commutant_dim([sz, sx]))
Pz2 = [np.kron(P, I2) for P in smeared(1.0)]
print("commutant Pz x I", commutant_dim(Pz2))
print("distribution", [np.real(np.trace(E @ I2 / 2)) for E in smeared(0.5)])
T = trine()
print("trine max commutator", max(np.abs(A @ B - B @ A).max() for A in T for B in T))
plus_i = np.array([1, 1j]) / np.sqrt(2)
rho = np.outer(plus_i, plus_i.conj())
print("trine in |+i>", [np.real(np.trace(rho @ E)) for E in T])
rho_x = np.outer(v, v.conj())
print("trine in |+x>", repr(np.array([np.real(np.trace(rho_x @ E)) for E in T])))

# kernel LP: sum_x mu[x,a] F[x] = E[a], rows sum to one, mu >= 0
def kernel_lp(E, F):
    n, m = len(F), len(E)
    d = F[0].shape[0]
    rows, rhs = [], []
    for a in range(m):
        for i in range(d):
            for j in range(d):
                for part in (np.real, np.imag):
                    r = np.zeros(n * m)
                    for x in range(n):
                        r[x * m + a] = part(F[x][i, j])
                    rows.append(r)
                    rhs.append(part(E[a][i, j]))
    for x in range(n):
        r = np.zeros(n * m)
        r[x * m:(x + 1) * m] = 1
        rows.append(r)
        rhs.append(1)
    res = linprog(np.zeros(n * m), A_eq=np.array(rows), b_eq=np.array(rhs), bounds=(0, None))
    return res.status, (res.x.reshape(n, m) if res.status == 0 else None)

print("kernel smeared vs Pz", kernel_lp(smeared(0.5), smeared(1.0)))
print("kernel Px vs Pz", kernel_lp(smeared(1.0, sx), smeared(1.0))[0])
print("kernel Pz vs smeared", kernel_lp(smeared(1.0), smeared(0.5))[0])
print("kernel smeared(1/4) vs smeared(1/2)", kernel_lp(smeared(0.25), smeared(0.5)))
print("kernel trine vs trine", kernel_lp(T, T)[0])
print("kernel coin vs trine", kernel_lp([I2 / 2, I2 / 2], T))

# joint of smeared(1/2), smeared(1/4) on the common basis |0>, |1>
mu = [[0.75, 0.25], [0.25, 0.75]]
nu = [[0.625, 0.375], [0.375, 0.625]]
for a in range(2):
    for b in range(2):
        print("joint", a, b, [mu[k][a] * nu[k][b] for k in range(2)])

# product joint of the trine with two kernels
mu = np.array([[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]])
nu = np.array([[0.2, 0.8], [0.6, 0.4], [1.0, 0.0]])
G = [sum(mu[x, a] * nu[x, b] * T[x] for x in range(3)) for a in range(2) for b in range(2)]
for g in G:
    print("product joint trine", repr(np.round(g.real, 15)))
print("E1 of product", repr(sum(mu[x, 0] * T[x] for x in range(3)).real))

# spectral representation of a rotated commutative observable
U = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)
E = [U @ np.diag(d) @ U.conj().T for d in ([0.6, 0.1], [0.3, 0.2], [0.1, 0.7])]
vals, vecs = np.linalg.eigh(E[0])
for k in range(2):
    vk = vecs[:, k]
    print("rotated row", k, [np.real(vk.conj() @ e @ vk) for e in E], "proj", repr(np.outer(vk, vk.conj())))
