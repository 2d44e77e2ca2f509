"""STO-3G basis machinery and analytic s-type Gaussian integrals.

All quantities are in atomic units (bohr, hartree). The closed forms below
cover s primitives only; anything with angular momentum raises
UnsupportedAngularMomentumError so callers can fall back to a Hamiltonian
fixture produced offline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import erf

ANGSTROM_TO_BOHR = 1.8897259886

# Boys-function small-argument switch; below this the 4-term Taylor series
# and the erf form agree to better than 1e-14.
BOYS_TAYLOR_SWITCH = 1e-6


class BasisError(ValueError):
    pass


class UnsupportedAngularMomentumError(BasisError):
    """Raised for any integral request involving p or higher shells."""


class GeometryError(BasisError):
    pass


def normalize_primitive(exponent: float, angular: tuple[int, int, int]) -> float:
    """Normalization constant of a Cartesian Gaussian x^i y^j z^k e^{-a r^2}."""
    if exponent <= 0:
        raise BasisError(f"exponent must be positive, got {exponent}")
    i, j, k = angular
    if min(i, j, k) < 0:
        raise BasisError(f"negative angular component in {angular}")
    l = i + j + k
    num = (8 * exponent) ** l * math.factorial(i) * math.factorial(j) * math.factorial(k)
    den = math.factorial(2 * i) * math.factorial(2 * j) * math.factorial(2 * k)
    return (2 * exponent / math.pi) ** 0.75 * math.sqrt(num / den)


@dataclass(frozen=True)
class GaussianPrimitive:
    exponent: float
    angular: tuple[int, int, int]
    center: tuple[float, float, float]
    norm: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "norm", normalize_primitive(self.exponent, self.angular))

    @property
    def is_s(self) -> bool:
        return self.angular == (0, 0, 0)


@dataclass(frozen=True)
class ContractedOrbital:
    """Fixed linear combination of primitives sharing one center and shell."""

    primitives: tuple[tuple[float, GaussianPrimitive], ...]
    label: str = ""

    def __post_init__(self):
        if not self.primitives:
            raise BasisError("contracted orbital needs at least one primitive")
        ang = {p.angular for _, p in self.primitives}
        cen = {p.center for _, p in self.primitives}
        if len(ang) > 1 or len(cen) > 1:
            raise BasisError("primitives of a contraction must share angular and center")


@dataclass(frozen=True)
class Molecule:
    atoms: tuple[tuple[int, tuple[float, float, float]], ...]
    charge: int = 0
    multiplicity: int = 1

    @property
    def n_electrons(self) -> int:
        n = sum(z for z, _ in self.atoms) - self.charge
        if n < 0:
            raise BasisError("negative electron count")
        return n


@dataclass(frozen=True)
class IntegralSet:
    """Contracted AO integrals; eri is physicist notation <ab|cd>."""

    overlap: np.ndarray
    kinetic: np.ndarray
    nuclear: np.ndarray
    eri: np.ndarray
    e_nuc: float


def gaussian_product(a: GaussianPrimitive, b: GaussianPrimitive):
    """Gaussian product theorem: combined exponent, center, and prefactor."""
    p = a.exponent + b.exponent
    ra = np.asarray(a.center)
    rb = np.asarray(b.center)
    rp = (a.exponent * ra + b.exponent * rb) / p
    mu = a.exponent * b.exponent / p
    pref = math.exp(-mu * float(np.dot(ra - rb, ra - rb)))
    return p, tuple(rp), pref


def _require_s(*prims: GaussianPrimitive) -> None:
    for p in prims:
        if not p.is_s:
            raise UnsupportedAngularMomentumError(
                f"closed forms cover s shells only, got angular {p.angular}; "
                "use a Hamiltonian fixture for heavier elements")


def overlap_s(a: GaussianPrimitive, b: GaussianPrimitive) -> float:
    _require_s(a, b)
    p, _, pref = gaussian_product(a, b)
    return a.norm * b.norm * (math.pi / p) ** 1.5 * pref


def kinetic_s(a: GaussianPrimitive, b: GaussianPrimitive) -> float:
    _require_s(a, b)
    p, _, pref = gaussian_product(a, b)
    mu = a.exponent * b.exponent / p
    ra = np.asarray(a.center)
    rb = np.asarray(b.center)
    r2 = float(np.dot(ra - rb, ra - rb))
    return a.norm * b.norm * mu * (3.0 - 2.0 * mu * r2) * (math.pi / p) ** 1.5 * pref


def boys_f0(t: float) -> float:
    """Zeroth Boys function F0(t) = 1/2 sqrt(pi/t) erf(sqrt(t))."""
    if t < 0:
        raise BasisError(f"Boys argument must be non-negative, got {t}")
    if t < BOYS_TAYLOR_SWITCH:
        return 1.0 - t / 3.0 + t * t / 10.0 - t * t * t / 42.0
    st = math.sqrt(t)
    return 0.5 * math.sqrt(math.pi / t) * float(erf(st))


def nuclear_attraction_s(a: GaussianPrimitive, b: GaussianPrimitive,
                         nucleus_center, z: int) -> float:
    _require_s(a, b)
    p, rp, pref = gaussian_product(a, b)
    rc = np.asarray(nucleus_center, dtype=float)
    t = p * float(np.dot(np.asarray(rp) - rc, np.asarray(rp) - rc))
    return -z * a.norm * b.norm * (2.0 * math.pi / p) * pref * boys_f0(t)


def eri_s(a: GaussianPrimitive, b: GaussianPrimitive,
          c: GaussianPrimitive, d: GaussianPrimitive) -> float:
    """Chemist-notation primitive repulsion integral (ab|cd), a,b on electron 1.

    Prefactor is the standard 2 pi^{5/2}; validated against a quadrature
    oracle in the test suite.
    """
    _require_s(a, b, c, d)
    p, ru, pref_ab = gaussian_product(a, b)
    q, rv, pref_cd = gaussian_product(c, d)
    ruv = np.asarray(ru) - np.asarray(rv)
    t = p * q / (p + q) * float(np.dot(ruv, ruv))
    pref = 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
    return (a.norm * b.norm * c.norm * d.norm) * pref * pref_ab * pref_cd * boys_f0(t)


def nuclear_repulsion(mol: Molecule) -> float:
    e = 0.0
    for m in range(len(mol.atoms)):
        zm, rm = mol.atoms[m]
        for n in range(m + 1, len(mol.atoms)):
            zn, rn = mol.atoms[n]
            d = math.dist(rm, rn)
            if d < 1e-10:
                raise GeometryError(f"coincident nuclei at atoms {m} and {n}")
            e += zm * zn / d
    return e


# Standard published STO-3G parameterization (s shells): per element symbol,
# list of shells, each a list of (exponent, contraction coefficient).
STO3G_TABLE: dict[str, list[list[tuple[float, float]]]] = {
    "H": [[(3.425250914, 0.1543289673),
           (0.6239137298, 0.5353281423),
           (0.1688554040, 0.4446345422)]],
    "He": [[(6.362421394, 0.1543289673),
            (1.158922999, 0.5353281423),
            (0.3136497915, 0.4446345422)]],
}

ELEMENT_SYMBOLS = {
    "H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8,
    "F": 9, "Ne": 10,
}
_Z_TO_SYMBOL = {z: s for s, z in ELEMENT_SYMBOLS.items()}


def load_basis_table(path) -> dict[str, list[list[tuple[float, float]]]]:
    """Optional override table: one `element shell exponent coefficient` per line."""
    table: dict[str, dict[str, list[tuple[float, float]]]] = {}
    for ln, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 4:
            raise BasisError(f"{path}:{ln}: expected `element shell exponent coefficient`")
        elem, shell = tok[0], tok[1]
        try:
            expo, coef = float(tok[2]), float(tok[3])
        except ValueError:
            raise BasisError(f"{path}:{ln}: non-numeric exponent/coefficient") from None
        table.setdefault(elem, {}).setdefault(shell, []).append((expo, coef))
    return {elem: list(shells.values()) for elem, shells in table.items()}


def basis_for(mol: Molecule, table=None) -> list[ContractedOrbital]:
    """Contracted s orbitals for every atom, renormalized to unit self-overlap."""
    table = STO3G_TABLE if table is None else table
    orbitals = []
    for z, center in mol.atoms:
        symbol = _Z_TO_SYMBOL.get(z, str(z))
        if symbol not in table:
            raise UnsupportedAngularMomentumError(
                f"element {symbol} (Z={z}) needs shells beyond s; "
                "supply its Hamiltonian as a fixture instead")
        for shell_idx, shell in enumerate(table[symbol]):
            prims = tuple((coef, GaussianPrimitive(expo, (0, 0, 0), tuple(center)))
                          for expo, coef in shell)
            raw = ContractedOrbital(prims, label=f"{symbol} {shell_idx + 1}s")
            self_ovl = _contract(overlap_s, raw, raw)
            scale = 1.0 / math.sqrt(self_ovl)
            orbitals.append(ContractedOrbital(
                tuple((coef * scale, p) for coef, p in prims), label=raw.label))
    return orbitals


def _contract(kernel, *orbitals: ContractedOrbital) -> float:
    """Sum a primitive kernel over the product of contraction expansions."""

    def rec(idx, coeff, prims):
        if idx == len(orbitals):
            return coeff * kernel(*prims)
        return sum(rec(idx + 1, coeff * d, prims + [p])
                   for d, p in orbitals[idx].primitives)

    return rec(0, 1.0, [])


def build_integrals(mol: Molecule, table=None) -> IntegralSet:
    """Contracted S, T, V, and physicist-notation ERI tensor plus e_nuc."""
    orbitals = basis_for(mol, table)
    n = len(orbitals)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            s[i, j] = s[j, i] = _contract(overlap_s, orbitals[i], orbitals[j])
            t[i, j] = t[j, i] = _contract(kinetic_s, orbitals[i], orbitals[j])
            vij = sum(_contract(lambda a, b, rc=rc, z=z: nuclear_attraction_s(a, b, rc, z),
                                orbitals[i], orbitals[j])
                      for z, rc in mol.atoms)
            v[i, j] = v[j, i] = vij
    chem = np.zeros((n, n, n, n))
    done = np.zeros((n, n, n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if done[a, b, c, d]:
                        continue
                    val = _contract(eri_s, orbitals[a], orbitals[b],
                                    orbitals[c], orbitals[d])
                    for idx in {(a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                                (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a)}:
                        chem[idx] = val
                        done[idx] = True
    # physicist <pq|rs> = chemist (pr|qs)
    eri_phys = chem.transpose(0, 2, 1, 3).copy()
    return IntegralSet(s, t, v, eri_phys, nuclear_repulsion(mol))


def parse_geometry(text: str) -> Molecule:
    """Parse `units angstrom|bohr` header plus `SYMBOL x y z` atom lines."""
    scale = None
    atoms = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0].lower() == "units":
            if len(tok) != 2 or tok[1].lower() not in ("angstrom", "bohr"):
                raise GeometryError(f"line {ln}: units must be `angstrom` or `bohr`")
            scale = ANGSTROM_TO_BOHR if tok[1].lower() == "angstrom" else 1.0
            continue
        if scale is None:
            raise GeometryError(f"line {ln}: missing `units` header before atoms")
        if len(tok) != 4:
            raise GeometryError(f"line {ln}: expected `SYMBOL x y z`")
        if tok[0] not in ELEMENT_SYMBOLS:
            raise GeometryError(f"line {ln}: unknown element symbol {tok[0]!r}")
        try:
            xyz = tuple(float(u) * scale for u in tok[1:])
        except ValueError:
            raise GeometryError(f"line {ln}: non-numeric coordinate") from None
        atoms.append((ELEMENT_SYMBOLS[tok[0]], xyz))
    if not atoms:
        raise GeometryError("geometry file contains no atoms")
    return Molecule(tuple(atoms))


def load_geometry(path) -> Molecule:
    return parse_geometry(Path(path).read_text())
