"""Built-in experiment catalog and the JSON experiment-document schema.

Documents are SI-units-only JSON of the form

    {"class": "<tag>", "params": {...}, "observed": {"f": ...}}

where ``observed`` carries exactly one of ``f`` (coherence fraction),
``T2_s`` (coherence time), or ``dEdt_J_per_s`` (heating bound).  Unknown
fields are rejected and no unit conversion is performed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .constants import ATOMIC_MASS, K_BOLTZMANN
from .errors import ParseError, ValidationError
from .experiments import (
    ALUMINIUM,
    NIOBIUM,
    CatSuperposition,
    ExperimentRecord,
    GasHeating,
    GratingDiffraction,
    Membrane,
    Micromirror,
    PointInterference,
    Squid,
    SuperconductorMaterial,
    TalbotLau,
)
from .kicks import Cuboid, Disc, MassGeometry, Point, Sphere

__all__ = [
    "CatalogEntry",
    "builtin_catalog",
    "catalog_by_id",
    "load_experiment",
    "loads_experiment",
    "record_to_document",
]


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    label: str
    year: Optional[int]
    kind: str
    record: ExperimentRecord
    published_mu: Optional[float] = None
    tolerance: float = 0.2
    assumed: bool = False
    source: str = ""
    notes: str = ""
    proposal: bool = False


_GOLD_DENSITY = 19320.0  # [kg/m^3]


def _gold_cluster(mass_amu: float) -> Sphere:
    mass = mass_amu * ATOMIC_MASS
    radius = (3.0 * mass / (4.0 * math.pi * _GOLD_DENSITY)) ** (1.0 / 3.0)
    return Sphere(mass, radius)


def _talbot_time(mass: float, period: float) -> float:
    from .constants import PLANCK_H
    return mass * period ** 2 / PLANCK_H


def builtin_catalog() -> tuple:
    """All parameterized experiments: historical rows, proposals, bounds."""
    u = ATOMIC_MASS
    silica_sphere = Sphere(2200.0 * 4.0 / 3.0 * math.pi * (20e-9) ** 3, 20e-9)
    nano_talbot = _talbot_time(silica_sphere.mass, 52e-9)

    entries = [
        CatalogEntry(
            id="maier-leibnitz1962", label="Neutron biprism interference",
            year=1962, kind="grating_diffraction",
            record=GratingDiffraction(
                geometry=Point(1.0 * u), slit_count=2, period=107e-6,
                fraction=0.6, L1=4.0, L2=5.7, mean_speed=907.0,
                source_width=10e-6, detector_width=30e-6),
            published_mu=4.8, source="historical-table"),
        CatalogEntry(
            id="zeilinger1982", label="Neutron double slit",
            year=1982, kind="grating_diffraction",
            record=GratingDiffraction(
                geometry=Point(1.0 * u), slit_count=2, period=126e-6,
                fraction=0.9, L1=5.0, L2=5.0, mean_speed=216.0,
                speed_fwhm=0.05, open_fraction=0.17,
                source_width=15e-6, detector_width=30e-6),
            published_mu=6.2, source="historical-table"),
        CatalogEntry(
            id="keith1988", label="Na atom grating diffraction",
            year=1988, kind="grating_diffraction",
            record=GratingDiffraction(
                geometry=Point(23.0 * u), slit_count=50, period=0.2e-6,
                fraction=0.5, L1=1.0, L2=1.5, mean_speed=1000.0,
                speed_fwhm=0.12, open_fraction=0.5,
                source_width=10e-6, detector_width=25e-6),
            published_mu=6.8, source="historical-table"),
        CatalogEntry(
            id="shimizu1992", label="Ne atom double slit (free fall)",
            year=1992, kind="grating_diffraction",
            record=GratingDiffraction(
                geometry=Point(20.0 * u), slit_count=2, period=6e-6,
                fraction=0.8, T1=0.1278, T2=0.0691, open_fraction=0.33,
                source_width=20e-6, detector_width=20e-6),
            published_mu=9.1, source="historical-table",
            notes="flight times from free fall over 8 cm and 11 cm"),
        CatalogEntry(
            id="grisenti1999", label="Kr beam transmission grating",
            year=1999, kind="grating_diffraction",
            record=GratingDiffraction(
                geometry=Point(84.0 * u), slit_count=100, period=0.1e-6,
                fraction=0.8, L1=0.45, L2=0.52, mean_speed=396.0,
                speed_fwhm=0.1, open_fraction=0.43,
                source_width=10e-6, detector_width=25e-6),
            published_mu=8.3, source="historical-table",
            notes="closed-form recomputation gives 8.4"),
        CatalogEntry(
            id="arndt1999", label="C60 fullerene grating diffraction",
            year=1999, kind="grating_diffraction",
            record=GratingDiffraction(
                geometry=Point(720.0 * u), slit_count=100, period=0.1e-6,
                fraction=0.6, L1=1.14, L2=1.25, mean_speed=226.0,
                speed_fwhm=0.6, open_fraction=0.38,
                source_width=10e-6, detector_width=8e-6),
            published_mu=10.6, source="historical-table"),
        CatalogEntry(
            id="borde1994", label="I2 Ramsey-Borde interferometer",
            year=1994, kind="point_interference",
            record=PointInterference(
                mass=254.0 * u, coherence_time=0.037 / 350.0, fraction=0.33,
                separation=1.6e-7),
            published_mu=7.3, source="ramsey-borde"),
        CatalogEntry(
            id="chapman1995", label="Na2 three-grating Mach-Zehnder",
            year=1995, kind="point_interference",
            record=PointInterference(
                mass=46.0 * u, coherence_time=2.1 / 820.0, fraction=0.35,
                separation=2e-5),
            published_mu=7.2, source="mach-zehnder"),
        CatalogEntry(
            id="peters2001", label="Cs fountain Mach-Zehnder",
            year=2001, kind="point_interference",
            record=PointInterference(
                mass=132.9 * u, coherence_time=0.32, fraction=0.62,
                separation=1.1e-3),
            source="mach-zehnder"),
        CatalogEntry(
            id="chung2009", label="Cs long-baseline Mach-Zehnder",
            year=2009, kind="point_interference",
            record=PointInterference(
                mass=132.9 * u, coherence_time=0.8, fraction=0.33,
                separation=2.8e-3),
            source="mach-zehnder"),
        CatalogEntry(
            id="andrews1997", label="Na BEC interference",
            year=1997, kind="point_interference",
            record=PointInterference(
                mass=23.0 * u, coherence_time=0.04, fraction=0.75,
                separation=4e-5),
            published_mu=8.4, source="bec",
            notes="condensate classicalizes at the single-atom rate"),
        CatalogEntry(
            id="jo2007", label="Na BEC chip interferometer",
            year=2007, kind="point_interference",
            record=PointInterference(
                mass=23.0 * u, coherence_time=0.2, fraction=0.15,
                separation=5e-6),
            published_mu=8.3, source="bec"),
        CatalogEntry(
            id="brezger2002", label="C70 Talbot-Lau interference",
            year=2002, kind="talbot_lau",
            record=TalbotLau(geometry=Point(840.0 * u),
                             pulse_separation=0.22 / 115.0, period=0.991e-6,
                             fraction=0.9),
            source="talbot-lau"),
        CatalogEntry(
            id="hackermueller2003", label="C60F48 Talbot-Lau interference",
            year=2003, kind="talbot_lau",
            record=TalbotLau(geometry=Point(1632.0 * u),
                             pulse_separation=0.22 / 105.0, period=0.991e-6,
                             fraction=0.75),
            source="talbot-lau"),
        CatalogEntry(
            id="hornberger2009", label="C60F48 Kapitza-Dirac Talbot-Lau",
            year=2009, kind="talbot_lau",
            record=TalbotLau(geometry=Point(1632.0 * u),
                             pulse_separation=0.105 / 100.0, period=266e-9,
                             fraction=0.9),
            source="talbot-lau"),
        CatalogEntry(
            id="gerlich2011", label="PFNS8 Kapitza-Dirac Talbot-Lau",
            year=2011, kind="talbot_lau",
            record=TalbotLau(geometry=Point(5672.0 * u),
                             pulse_separation=0.105 / 75.0, period=266e-9,
                             fraction=0.8),
            source="talbot-lau"),
        CatalogEntry(
            id="tl-cluster-1e5", label="Talbot-Lau gold clusters, 1e5 amu",
            year=None, kind="talbot_lau", proposal=True,
            record=TalbotLau(geometry=_gold_cluster(1e5),
                             pulse_separation=_talbot_time(1e5 * u, 100e-9),
                             period=100e-9, fraction=0.5),
            published_mu=14.5, tolerance=1.0, assumed=True,
            source="table-proposals",
            notes="interrogation time set to the 100 nm Talbot time, f=0.5"),
        CatalogEntry(
            id="tl-cluster-1e8", label="Talbot-Lau gold clusters, 1e8 amu",
            year=None, kind="talbot_lau", proposal=True,
            record=TalbotLau(geometry=_gold_cluster(1e8),
                             pulse_separation=_talbot_time(1e8 * u, 100e-9),
                             period=100e-9, fraction=0.5),
            published_mu=23.3, tolerance=1.0, assumed=True,
            source="table-proposals",
            notes="interrogation time set to the 100 nm Talbot time, f=0.5"),
        CatalogEntry(
            id="satellite", label="Satellite Cs interferometer (2000 s)",
            year=None, kind="point_interference", proposal=True,
            record=PointInterference(
                mass=132.9 * u, coherence_time=4000.0, fraction=0.5,
                separation=14.0),
            published_mu=14.5, tolerance=0.1, source="table-proposals"),
        CatalogEntry(
            id="micromirror", label="Oscillating micromirror superposition",
            year=None, kind="micromirror", proposal=True,
            record=Micromirror(edge=10e-6, density=2300.0,
                               omega_m=2.0 * math.pi * 500.0,
                               ground_amplitude=170e-15, coupling=1.63,
                               fidelity=0.5),
            published_mu=19.0, tolerance=0.3, source="table-proposals"),
        CatalogEntry(
            id="membrane", label="Oscillating micromembrane (1000 cycles)",
            year=None, kind="membrane", proposal=True,
            record=Membrane(radius=7.5e-6, thickness=100e-9, density=2700.0,
                            omega_m=2.0 * math.pi * 10.56e6, cycles=1000,
                            fidelity=0.5),
            published_mu=11.5, tolerance=0.3, source="table-proposals",
            notes="48 pg Al disc standing in for the flexural mode"),
        CatalogEntry(
            id="nanosphere", label="Silica nanosphere double slit",
            year=None, kind="grating_diffraction", proposal=True,
            record=GratingDiffraction(
                geometry=silica_sphere, slit_count=2, period=52e-9,
                fraction=0.5, T1=0.075, T2=0.075, fixed_separation=52e-9),
            published_mu=20.5, tolerance=0.5, assumed=True,
            source="table-proposals",
            notes="fringe Fourier amplitude blurred at the slit distance; "
                  "symmetric 75 ms flight times assumed"),
        CatalogEntry(
            id="friedman2000", label="Nb SQUID persistent currents",
            year=2000, kind="squid",
            record=Squid(NIOBIUM, 560e-6, 5e-12, 1e-9),
            published_mu=5.2, tolerance=0.5, source="squid"),
        CatalogEntry(
            id="wal2000", label="Al SQUID persistent currents",
            year=2000, kind="squid",
            record=Squid(ALUMINIUM, 20e-6, 36000e-18, 15e-9),
            published_mu=3.3, tolerance=0.5, source="squid"),
        CatalogEntry(
            id="hime2006", label="Al SQUID persistent currents",
            year=2006, kind="squid",
            record=Squid(ALUMINIUM, 180e-6, 1e-12, 10e-9),
            assumed=True, source="squid",
            notes="1 um^2 cross section is an assumption, not a measurement"),
        CatalogEntry(
            id="squid-large", label="Hypothetical large Al SQUID",
            year=None, kind="squid", proposal=True,
            record=Squid(ALUMINIUM, 0.02, 100e-12, 1e-3),
            published_mu=14.5, tolerance=0.5, source="table-proposals"),
        CatalogEntry(
            id="gas-rb", label="Rb gas heating bound (1 uK/s)",
            year=None, kind="gas_heating", proposal=True,
            record=GasHeating(mass=86.9 * u,
                              energy_rate_bound=1.5 * K_BOLTZMANN * 1e-6),
            source="classical-bound"),
        CatalogEntry(
            id="cat", label="Gedanken cat (4 kg, 10 cm, 1 s)",
            year=None, kind="cat_superposition", proposal=True,
            record=CatSuperposition(mass=4.0, separation=0.1, hold_time=1.0),
            published_mu=57.0, tolerance=1.0, source="table-proposals"),
    ]
    return tuple(entries)


def catalog_by_id(entry_id: str) -> CatalogEntry:
    for entry in builtin_catalog():
        if entry.id == entry_id:
            return entry
    raise KeyError(f"no catalog entry {entry_id!r}")


# --- JSON schema --------------------------------------------------------------

_GEOMETRY_FIELDS = {
    "point": {"mass_kg"},
    "sphere": {"mass_kg", "radius_m"},
    "cuboid": {"mass_kg", "edges_m"},
    "disc": {"mass_kg", "radius_m", "thickness_m"},
}


def _geometry_from(doc) -> MassGeometry:
    if not isinstance(doc, dict) or "shape" not in doc:
        raise ParseError("geometry must be an object with a 'shape' field")
    shape = doc["shape"]
    if shape not in _GEOMETRY_FIELDS:
        raise ParseError(f"unknown geometry shape {shape!r}")
    extra = set(doc) - _GEOMETRY_FIELDS[shape] - {"shape"}
    if extra:
        raise ParseError(f"unknown geometry fields {sorted(extra)}")
    missing = _GEOMETRY_FIELDS[shape] - set(doc)
    if missing:
        raise ParseError(f"geometry missing fields {sorted(missing)}")
    if shape == "point":
        return Point(doc["mass_kg"])
    if shape == "sphere":
        return Sphere(doc["mass_kg"], doc["radius_m"])
    if shape == "cuboid":
        edges = doc["edges_m"]
        if not (isinstance(edges, (list, tuple)) and len(edges) == 3):
            raise ParseError("edges_m must be a list of three lengths")
        return Cuboid(doc["mass_kg"], *edges)
    return Disc(doc["mass_kg"], doc["radius_m"], doc["thickness_m"])


def _geometry_doc(geom: MassGeometry) -> dict:
    if isinstance(geom, Point):
        return {"shape": "point", "mass_kg": geom.mass}
    if isinstance(geom, Sphere):
        return {"shape": "sphere", "mass_kg": geom.mass,
                "radius_m": geom.radius}
    if isinstance(geom, Cuboid):
        return {"shape": "cuboid", "mass_kg": geom.mass,
                "edges_m": [geom.edge_a, geom.edge_b, geom.edge_c]}
    return {"shape": "disc", "mass_kg": geom.mass, "radius_m": geom.radius,
            "thickness_m": geom.thickness}


def _take(params: dict, allowed: dict) -> dict:
    """Validate field names and return keyword arguments."""
    extra = set(params) - set(allowed)
    if extra:
        raise ParseError(f"unknown fields {sorted(extra)}")
    out = {}
    for key, (kw, required) in allowed.items():
        if key in params:
            out[kw] = params[key]
        elif required:
            raise ParseError(f"missing required field {key!r}")
    return out


def _observed_fraction(observed) -> float:
    if set(observed) != {"f"}:
        raise ParseError("observed must carry exactly 'f' for this class")
    return observed["f"]


def loads_experiment(text: str) -> ExperimentRecord:
    """Parse a JSON experiment document into a validated record."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return record_from_document(doc)


def load_experiment(path) -> ExperimentRecord:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_experiment(fh.read())


_MATERIAL_FIELDS = {"k_F_per_m", "gap_J", "debye_energy_J"}


def record_from_document(doc) -> ExperimentRecord:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    extra = set(doc) - {"class", "params", "observed"}
    if extra:
        raise ParseError(f"unknown top-level fields {sorted(extra)}")
    for key in ("class", "params", "observed"):
        if key not in doc:
            raise ParseError(f"missing top-level field {key!r}")
    cls, params, observed = doc["class"], doc["params"], doc["observed"]
    if not isinstance(params, dict) or not isinstance(observed, dict):
        raise ParseError("params and observed must be objects")

    try:
        if cls == "point_interference":
            kw = _take(params, {
                "mass_kg": ("mass", True), "t_s": ("coherence_time", True),
                "separation_m": ("separation", False)})
            return PointInterference(fraction=_observed_fraction(observed), **kw)
        if cls == "grating_diffraction":
            kw = _take(params, {
                "slit_count": ("slit_count", True), "period_m": ("period", True),
                "T1_s": ("T1", False), "T2_s": ("T2", False),
                "L1_m": ("L1", False), "L2_m": ("L2", False),
                "speed_m_per_s": ("mean_speed", False),
                "speed_fwhm_rel": ("speed_fwhm", False),
                "open_fraction": ("open_fraction", False),
                "source_width_m": ("source_width", False),
                "detector_width_m": ("detector_width", False),
                "fixed_separation_m": ("fixed_separation", False),
                "geometry": ("geometry", True)})
            kw["geometry"] = _geometry_from(kw["geometry"])
            return GratingDiffraction(fraction=_observed_fraction(observed), **kw)
        if cls == "talbot_lau":
            kw = _take(params, {
                "T_s": ("pulse_separation", True), "period_m": ("period", True),
                "geometry": ("geometry", True)})
            kw["geometry"] = _geometry_from(kw["geometry"])
            return TalbotLau(fraction=_observed_fraction(observed), **kw)
        if cls == "micromirror":
            kw = _take(params, {
                "edge_m": ("edge", True),
                "density_kg_per_m3": ("density", True),
                "omega_m_rad_per_s": ("omega_m", True),
                "ground_amplitude_m": ("ground_amplitude", True),
                "coupling": ("coupling", True)})
            return Micromirror(fidelity=_observed_fraction(observed), **kw)
        if cls == "membrane":
            kw = _take(params, {
                "radius_m": ("radius", True), "thickness_m": ("thickness", True),
                "density_kg_per_m3": ("density", True),
                "omega_m_rad_per_s": ("omega_m", True),
                "cycles": ("cycles", True)})
            return Membrane(fidelity=_observed_fraction(observed), **kw)
        if cls == "squid":
            kw = _take(params, {
                "material": ("material", True),
                "loop_length_m": ("loop_length", True),
                "cross_section_m2": ("cross_section", True),
                "current_difference_A": ("current_difference", False)})
            mat = kw.pop("material")
            if not isinstance(mat, dict) or set(mat) != _MATERIAL_FIELDS:
                raise ParseError(
                    f"material must carry exactly {sorted(_MATERIAL_FIELDS)}")
            material = SuperconductorMaterial(
                k_fermi=mat["k_F_per_m"], gap=mat["gap_J"],
                debye_energy=mat["debye_energy_J"])
            if set(observed) != {"T2_s"}:
                raise ParseError("squid observed must carry exactly 'T2_s'")
            return Squid(material=material, coherence_time=observed["T2_s"],
                         **kw)
        if cls == "gas_heating":
            kw = _take(params, {"mass_kg": ("mass", True)})
            if set(observed) != {"dEdt_J_per_s"}:
                raise ParseError(
                    "gas_heating observed must carry exactly 'dEdt_J_per_s'")
            return GasHeating(energy_rate_bound=observed["dEdt_J_per_s"], **kw)
        if cls == "cat_superposition":
            kw = _take(params, {
                "mass_kg": ("mass", True), "separation_m": ("separation", True),
                "density_kg_per_m3": ("density", False)})
            if set(observed) != {"T2_s"}:
                raise ParseError(
                    "cat_superposition observed must carry exactly 'T2_s'")
            return CatSuperposition(hold_time=observed["T2_s"], **kw)
    except (TypeError,) as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown experiment class {cls!r}")


def record_to_document(record: ExperimentRecord) -> dict:
    """Serialize a record to the document schema (round-trips exactly)."""
    if isinstance(record, PointInterference):
        params = {"mass_kg": record.mass, "t_s": record.coherence_time}
        if record.separation is not None:
            params["separation_m"] = record.separation
        return {"class": "point_interference", "params": params,
                "observed": {"f": record.fraction}}
    if isinstance(record, GratingDiffraction):
        params = {"geometry": _geometry_doc(record.geometry),
                  "slit_count": record.slit_count, "period_m": record.period}
        for key, attr in (("T1_s", "T1"), ("T2_s", "T2"), ("L1_m", "L1"),
                          ("L2_m", "L2"), ("speed_m_per_s", "mean_speed"),
                          ("speed_fwhm_rel", "speed_fwhm"),
                          ("open_fraction", "open_fraction"),
                          ("source_width_m", "source_width"),
                          ("detector_width_m", "detector_width"),
                          ("fixed_separation_m", "fixed_separation")):
            value = getattr(record, attr)
            if value is not None:
                params[key] = value
        return {"class": "grating_diffraction", "params": params,
                "observed": {"f": record.fraction}}
    if isinstance(record, TalbotLau):
        return {"class": "talbot_lau",
                "params": {"geometry": _geometry_doc(record.geometry),
                           "T_s": record.pulse_separation,
                           "period_m": record.period},
                "observed": {"f": record.fraction}}
    if isinstance(record, Micromirror):
        return {"class": "micromirror",
                "params": {"edge_m": record.edge,
                           "density_kg_per_m3": record.density,
                           "omega_m_rad_per_s": record.omega_m,
                           "ground_amplitude_m": record.ground_amplitude,
                           "coupling": record.coupling},
                "observed": {"f": record.fidelity}}
    if isinstance(record, Membrane):
        return {"class": "membrane",
                "params": {"radius_m": record.radius,
                           "thickness_m": record.thickness,
                           "density_kg_per_m3": record.density,
                           "omega_m_rad_per_s": record.omega_m,
                           "cycles": record.cycles},
                "observed": {"f": record.fidelity}}
    if isinstance(record, Squid):
        return {"class": "squid",
                "params": {"material": {
                    "k_F_per_m": record.material.k_fermi,
                    "gap_J": record.material.gap,
                    "debye_energy_J": record.material.debye_energy},
                    "loop_length_m": record.loop_length,
                    "cross_section_m2": record.cross_section,
                    "current_difference_A": record.current_difference},
                "observed": {"T2_s": record.coherence_time}}
    if isinstance(record, GasHeating):
        return {"class": "gas_heating", "params": {"mass_kg": record.mass},
                "observed": {"dEdt_J_per_s": record.energy_rate_bound}}
    if isinstance(record, CatSuperposition):
        return {"class": "cat_superposition",
                "params": {"mass_kg": record.mass,
                           "separation_m": record.separation,
                           "density_kg_per_m3": record.density},
                "observed": {"T2_s": record.hold_time}}
    raise ValidationError(f"unknown record type {type(record).__name__}")
