"""Region construction and topological diagnostics.

Regions live on the surface-code mode grid: mode id = x * cols + y for
grid coordinates (x, y).  All entropies are in bits.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import engine
from .engine import symplectic_spectrum, von_neumann_entropy
from .errors import ValidationError

KP_SUBSETS = (("A",), ("B",), ("C",), ("A", "B"), ("B", "C"), ("A", "C"),
              ("A", "B", "C"))
KP_SIGNS = (1, 1, 1, -1, -1, -1, 1)


@dataclass(frozen=True)
class RegionSet:
    """Named mode-index regions with their construction geometry."""

    kind: str  # 'KP', 'LW' or 'custom'
    regions: dict
    geometry: dict = field(default_factory=dict)

    def union(self, *names):
        out = set()
        for name in names:
            out |= set(self.regions[name])
        return sorted(out)


@dataclass
class TopoReport:
    """Per-squeezing-point diagnostics record."""

    log_s: float
    kappa: float = 1.0
    tee_kp: float = None
    tee_lw: float = None
    tln_kp: float = None
    tmi: float = None
    tmi_lower: float = None
    tee_upper: float = None
    region_entropies: dict = field(default_factory=dict)
    spectra_meta: dict = field(default_factory=dict)
    geometry: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "log_s": self.log_s,
            "kappa": self.kappa,
            "tee_kp": self.tee_kp,
            "tee_lw": self.tee_lw,
            "tln": self.tln_kp,
            "tmi": self.tmi,
            "tmi_lower": self.tmi_lower,
            "tee_upper": self.tee_upper,
            "region_entropies": self.region_entropies,
            "spectra_meta": self.spectra_meta,
            "geometry": self.geometry,
        }


def _check_margin(spec, center, reach, need):
    cx, cy = center
    margin = min(cx, cy, spec.rows - 1 - cx, spec.cols - 1 - cy) - reach
    if margin < need:
        raise ValidationError("region of reach %g does not fit with margin %g" % (reach, need))


def kp_regions(spec, center=None, radius=None):
    """Disk split into three 120-degree sectors A, B, C about `center`.

    Sector boundaries tie-break deterministically: polar angle in
    [0, 120) degrees goes to A, [120, 240) to B, the rest to C.  The
    complement of the disk is the implicit fourth region D.
    """
    n, m = spec.rows, spec.cols
    if center is None:
        center = ((n - 1) / 2.0, (m - 1) / 2.0)
    if radius is None:
        radius = min(n, m) / 6.0 + 0.5
    _check_margin(spec, center, radius, radius / 2.0)
    cx, cy = center
    parts = {"A": [], "B": [], "C": []}
    for x in range(n):
        for y in range(m):
            dx, dy = x - cx, y - cy
            if dx * dx + dy * dy <= radius * radius:
                ang = np.degrees(np.arctan2(dy, dx)) % 360.0
                name = "A" if ang < 120 else ("B" if ang < 240 else "C")
                parts[name].append(x * m + y)
    if any(not v for v in parts.values()):
        raise ValidationError("radius %g spans an empty sector" % radius)
    return RegionSet("KP", parts, {"center": tuple(center), "radius": float(radius),
                                   "rows": n, "cols": m})


def lw_regions(spec, center=None, inner=6, width=3):
    """Square annulus regions for the Levin-Wen combination.

    A is the full Chebyshev annulus of hole side `inner` and width
    `width`; B removes the top strip, C the bottom strip and D both
    (leaving two disconnected arms), so that |A| - |B| = |C| - |D|.
    """
    if width <= 0:
        raise ValidationError("width must be positive")
    n, m = spec.rows, spec.cols
    if center is None:
        center = ((n - 1) / 2.0, (m - 1) / 2.0)
    h = inner / 2.0
    _check_margin(spec, center, h + width, 0.0)
    cx, cy = center
    parts = {"A": [], "B": [], "C": [], "D": []}
    for x in range(n):
        for y in range(m):
            dx, dy = x - cx, y - cy
            cheb = max(abs(dx), abs(dy))
            if not h < cheb <= h + width:
                continue
            i = x * m + y
            top = dx < -h
            bot = dx > h
            parts["A"].append(i)
            if not top:
                parts["B"].append(i)
            if not bot:
                parts["C"].append(i)
            if not top and not bot:
                parts["D"].append(i)
    sizes = {k: len(v) for k, v in parts.items()}
    if sizes["A"] - sizes["B"] != sizes["C"] - sizes["D"]:
        raise ValidationError("annulus strips are unbalanced: %s" % sizes)
    return RegionSet("LW", parts, {"center": tuple(center), "inner": float(inner),
                                   "width": float(width), "rows": n, "cols": m})


def region_entropy(cov, region, tol_half=1e-9):
    """Von Neumann entropy (bits) of the reduction to `region`."""
    return von_neumann_entropy(symplectic_spectrum(cov, region, tol_half=tol_half))


def tee_kp(cov, regions):
    """Kitaev-Preskill combination -(S_A+S_B+S_C-S_AB-S_BC-S_AC+S_ABC)."""
    if regions.kind != "KP":
        raise ValidationError("tee_kp requires KP regions")
    total = 0.0
    for names, sign in zip(KP_SUBSETS, KP_SIGNS):
        total += sign * region_entropy(cov, regions.union(*names))
    return -total


def tee_lw(cov, regions):
    """Levin-Wen combination -1/2 [(S_A - S_B) - (S_C - S_D)]."""
    if regions.kind != "LW":
        raise ValidationError("tee_lw requires LW regions")
    s = {name: region_entropy(cov, regions.regions[name]) for name in "ABCD"}
    return -0.5 * ((s["A"] - s["B"]) - (s["C"] - s["D"]))


def tln_kp(cov, regions):
    """KP combination with log-negativity substituted for entropy."""
    if regions.kind != "KP":
        raise ValidationError("tln_kp requires KP regions")
    total = 0.0
    for names, sign in zip(KP_SUBSETS, KP_SIGNS):
        total += sign * engine.log_negativity(cov, regions.union(*names))
    return -total


def mutual_information(cov, region, tol_half=1e-9):
    """I_X = S_X + S_Xc - S_total."""
    region = sorted(set(region))
    if not region:
        raise ValidationError("region must be non-empty")
    n = cov.n_modes
    comp = sorted(set(range(n)) - set(region))
    s_x = region_entropy(cov, region, tol_half)
    if not comp:
        return 0.0
    s_xc = region_entropy(cov, comp, tol_half)
    s_tot = region_entropy(cov, range(n), tol_half)
    return s_x + s_xc - s_tot


def tmi(cov, regions):
    """Topological mutual information -1/2 (I_A+I_B+I_C-I_AB-I_BC-I_AC+I_ABC)."""
    if regions.kind != "KP":
        raise ValidationError("tmi requires KP regions")
    total = 0.0
    for names, sign in zip(KP_SUBSETS, KP_SIGNS):
        total += sign * mutual_information(cov, regions.union(*names))
    return -0.5 * total


def tmi_lower_bound(cov_pure, regions):
    """Exact high-temperature limit of the TMI.

    Evaluates -1/2 sum_X zeta(X) sum_i log2(2 sigma_i^X) over the fourteen
    unions of {A, B, C, D} (D the disk complement), zeta = +1 for singles
    and triples, -1 for pairs.  Eigenvalues at 1/2 contribute exactly 0, so
    no spectral classification is needed.
    """
    if regions.kind != "KP":
        raise ValidationError("tmi_lower_bound requires KP regions")
    if cov_pure.kappa != 1.0:
        raise ValidationError("tmi_lower_bound expects the pure (kappa=1) state")
    n = cov_pure.n_modes
    named = dict(regions.regions)
    named["D"] = sorted(set(range(n)) - set(regions.union("A", "B", "C")))
    total = 0.0
    for size in (1, 2, 3):
        zeta = -1 if size == 2 else 1
        for combo in combinations("ABCD", size):
            region = sorted(set().union(*[named[c] for c in combo]))
            spec = symplectic_spectrum(cov_pure, region)
            vals = np.clip(spec.values, 0.5, None)
            total += -0.5 * zeta * float(np.sum(np.log2(2.0 * vals)))
    return total


def sandwich_regions(lw):
    """Derive the bound regions E, F1, F2, F from LW regions.

    E = A minus B (top strip), F1 = A minus C (bottom strip), F2 = D (the
    two arms) and F = F1 union F2.
    """
    if lw.kind != "LW":
        raise ValidationError("sandwich regions derive from LW regions")
    a = set(lw.regions["A"])
    e = sorted(a - set(lw.regions["B"]))
    f1 = sorted(a - set(lw.regions["C"]))
    f2 = sorted(lw.regions["D"])
    f = sorted(set(f1) | set(f2))
    return {"E": e, "F1": f1, "F2": f2, "F": f}


def bipartite_mutual_information(cov, region_x, region_y):
    """I_{X,Y} = S_X + S_Y - S_XY for disjoint regions."""
    if set(region_x) & set(region_y):
        raise ValidationError("bound regions must be disjoint")
    s_x = region_entropy(cov, region_x)
    s_y = region_entropy(cov, region_y)
    s_xy = region_entropy(cov, sorted(set(region_x) | set(region_y)))
    return s_x + s_y - s_xy


def tmi_sandwich_bounds(cov, lw):
    """(lower, upper) bounds sandwiching the TMI from the LW regions."""
    reg = sandwich_regions(lw)
    i_ef = bipartite_mutual_information(cov, reg["E"], reg["F"])
    i_ef1 = bipartite_mutual_information(cov, reg["E"], reg["F1"])
    i_ef2 = bipartite_mutual_information(cov, reg["E"], reg["F2"])
    return min(i_ef - i_ef1 - i_ef2, 0.0), max(i_ef1, i_ef2)


def sigma_one(s):
    """Symplectic eigenvalue of one mode of the 3-mode reference network."""
    s4 = s ** 4
    return 0.5 * np.sqrt((1 + 3 * s4 + 2 * s4 ** 2) / (1 + 3 * s4))


def tee_upper_bound(s):
    """Closed-form TEE upper bound: entropy of {sigma_1(s)} in bits."""
    if s <= 0:
        raise ValidationError("s must be positive")
    sig = sigma_one(s)
    spec = engine.SymplecticSpectrum([sig])
    return von_neumann_entropy(spec)
