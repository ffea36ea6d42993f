"""Run configuration: YAML parsing with line-anchored errors."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .assembly import BOUNDED, UNBOUNDED, Subdomain
from .geometry import BoundaryElement
from .material import DampingProfile, Material
from .mesh import Mesh, halfspace_mesh
from .radial import DEFAULT_XI_BOUNDED, DEFAULT_XI_UNBOUNDED, RadialGrid

CONFIG_DIR = Path(__file__).parent / "configs"


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class _Section(dict):
    line = None
    key_lines = None

    def where(self, key):
        return (self.key_lines or {}).get(key, self.line)


class _LineLoader(yaml.SafeLoader):
    def construct_mapping(self, node, deep=False):
        mapping = _Section(super().construct_mapping(node, deep=True))
        mapping.line = node.start_mark.line + 1
        mapping.key_lines = {k.value: k.start_mark.line + 1 for k, _ in node.value}
        return mapping


# the stock constructor copies into a plain dict, which would drop the line info
_LineLoader.add_constructor("tag:yaml.org,2002:map", lambda loader, node: loader.construct_mapping(node))


def _get(section, key, kind=float, default=..., check=None, what=None):
    if key not in section:
        if default is ...:
            raise ConfigError(f"missing required key {key!r}", section.line)
        return default
    value = section[key]
    try:
        value = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key!r} must be {kind.__name__}, got {value!r}", section.where(key)) from None
    if check is not None and not check(value):
        raise ConfigError(f"{key!r} {what or 'is out of range'}: {value!r}", section.where(key))
    return value


def _section(parent, key, required=False):
    value = parent.get(key)
    if value is None:
        if required:
            raise ConfigError(f"missing section {key!r}", parent.line)
        out = _Section()
        out.line = parent.where(key)
        return out
    if not isinstance(value, dict):
        raise ConfigError(f"{key!r} must be a mapping", parent.where(key))
    return value


@dataclass
class RunConfig:
    """Everything one run needs; ``build_mesh`` applies study overrides."""

    mesh_spec: dict
    materials: dict
    p0: float
    b: float
    frequencies: list
    symmetry: bool = True
    surface: bool = True
    field_output: bool = False
    phases: list = field(default_factory=list)
    refine: int = 0
    field_subdomains: list = None
    oracle: bool = False
    convergence: dict = None
    source: str = ""

    def build_mesh(self, n_steps=None, gll_points=None):
        spec = self.mesh_spec
        if spec["type"] == "halfspace":
            n_b = n_steps or spec["n_bounded"]
            n_u = n_steps or spec["n_unbounded"]
            degree = (gll_points or spec["gll_points"]) - 1
            return halfspace_mesh(
                size=spec["size"], degree=degree, segments=spec["segments"], n_bounded=n_b,
                n_unbounded=n_u, material=self.materials[spec["material"]], xi_bounded=spec["xi_bounded"],
                truncation=spec["truncation"], zeta_truncation=spec["zeta_truncation"],
                full=not self.symmetry, damping_form=spec["damping_form"],
            )
        if gll_points is not None:
            raise ConfigError("the gll_points study needs a parametric halfspace mesh")
        return _explicit_mesh(spec, self.materials, n_steps)

    @property
    def material(self):
        """Material of the loaded medium (first bounded subdomain)."""
        spec = self.mesh_spec
        if spec["type"] == "halfspace":
            return self.materials[spec["material"]]
        for sub in spec["subdomains"]:
            if sub["kind"] == BOUNDED:
                return self.materials[sub["material"]]
        return next(iter(self.materials.values()))


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text, source=str(path))


def parse_config(text, source="<string>"):
    try:
        root = yaml.load(text, Loader=_LineLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"YAML syntax: {getattr(exc, 'problem', exc)}", mark.line + 1 if mark else None) from None
    if not isinstance(root, dict):
        raise ConfigError("top level must be a mapping", 1)

    materials = {}
    mats = _section(root, "materials", required=True)
    for name, m in mats.items():
        if not isinstance(m, dict):
            raise ConfigError(f"material {name!r} must be a mapping", mats.where(name))
        try:
            materials[name] = Material(
                _get(m, "young_modulus"), _get(m, "poisson_ratio"), _get(m, "density"),
                _get(m, "damping_ratio", default=0.0),
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"material {name!r}: {exc}", m.line) from None

    load = _section(root, "load", required=True)
    p0 = _get(load, "p0")
    b = _get(load, "b", check=lambda v: v > 0, what="must be positive")

    freqs = root.get("frequencies")
    if not isinstance(freqs, list) or not freqs:
        raise ConfigError("frequencies must be a non-empty list (Hz)", root.where("frequencies"))
    try:
        freqs = [float(f) for f in freqs]
    except (TypeError, ValueError):
        raise ConfigError("frequencies must be numbers", root.where("frequencies")) from None
    if any(f <= 0 for f in freqs):
        raise ConfigError("frequencies must be positive", root.where("frequencies"))

    mesh_spec = _mesh_spec(_section(root, "mesh", required=True), materials)

    out = _section(root, "output")
    phases = out.get("phases", [])
    if not isinstance(phases, list) or any(not isinstance(p, (int, float)) or not 0 <= p < 360 for p in phases):
        raise ConfigError("phases must be a list of angles in [0, 360)", out.where("phases"))
    subs = out.get("subdomains", "all")
    if subs != "all" and not (isinstance(subs, list) and all(isinstance(k, int) for k in subs)):
        raise ConfigError("output.subdomains must be 'all' or a list of indices", out.where("subdomains"))

    conv = None
    if root.get("convergence") is not None:
        c = _section(root, "convergence")
        axis = c.get("axis")
        if axis not in ("radial_steps", "gll_points"):
            raise ConfigError("convergence.axis must be radial_steps or gll_points", c.where("axis"))
        values = c.get("values")
        if (not isinstance(values, list) or not values or any(not isinstance(v, int) for v in values)
                or any(b2 <= a2 for a2, b2 in zip(values[:-1], values[1:]))):
            raise ConfigError("convergence.values must be strictly increasing integers", c.where("values"))
        conv = {"axis": axis, "values": values}

    cfg = RunConfig(
        mesh_spec=mesh_spec,
        materials=materials,
        p0=p0,
        b=b,
        frequencies=freqs,
        symmetry=bool(root.get("symmetry", mesh_spec["type"] == "halfspace")),
        surface=bool(out.get("surface", True)),
        field_output=bool(out.get("field", bool(phases))),
        phases=[float(p) for p in phases],
        refine=_get(out, "refine", int, default=0, check=lambda v: v >= 0, what="must be >= 0"),
        field_subdomains=None if subs == "all" else list(subs),
        oracle=bool(root.get("oracle", False)),
        convergence=conv,
        source=source,
    )
    if conv is not None and not cfg.oracle:
        raise ConfigError("a convergence study needs oracle: true", root.where("convergence"))
    return cfg


def _mesh_spec(mesh, materials):
    kind = mesh.get("type", "halfspace")
    if kind == "halfspace":
        mat = mesh.get("material", next(iter(materials)))
        if mat not in materials:
            raise ConfigError(f"unknown material {mat!r}", mesh.where("material"))
        far = _section(mesh, "unbounded")
        near = _section(mesh, "bounded")
        form = far.get("damping_form", "scaled")
        if form not in ("scaled", "divergence"):
            raise ConfigError("damping_form must be scaled or divergence", far.where("damping_form"))
        spec = {
            "type": "halfspace",
            "material": mat,
            "size": _get(mesh, "size", check=lambda v: v > 0, what="must be positive"),
            "segments": _get(mesh, "segments", int, default=4, check=lambda v: v >= 1, what="must be >= 1"),
            "gll_points": _get(mesh, "gll_points", int, default=10, check=lambda v: 2 <= v <= 65,
                               what="must lie in [2, 65]"),
            "n_bounded": _get(near, "n_steps", int, default=100, check=lambda v: v >= 2, what="must be >= 2"),
            "xi_bounded": _get(near, "xi_start", default=DEFAULT_XI_BOUNDED, check=lambda v: 0 < v < 1,
                               what="must lie in (0, 1)"),
            "n_unbounded": _get(far, "n_steps", int, default=100, check=lambda v: v >= 2, what="must be >= 2"),
            "truncation": _get(far, "xi_start", default=DEFAULT_XI_UNBOUNDED, check=lambda v: v > 1,
                               what="must exceed 1"),
            "zeta_truncation": _get(far, "zeta_start", default=1.0, check=lambda v: v >= 0,
                                    what="must be non-negative"),
            "damping_form": form,
        }
        return spec
    if kind != "explicit":
        raise ConfigError("mesh.type must be halfspace or explicit", mesh.where("type"))
    nodes = mesh.get("nodes")
    if not isinstance(nodes, dict) or not nodes:
        raise ConfigError("explicit mesh needs a nodes mapping id -> [x, y]", mesh.where("nodes"))
    coords = {}
    for nid, xy in nodes.items():
        if not (isinstance(xy, list) and len(xy) == 2):
            raise ConfigError(f"node {nid!r} must be [x, y]", nodes.where(nid))
        coords[nid] = np.array(xy, dtype=float)
    subs = mesh.get("subdomains")
    if not isinstance(subs, list) or not subs:
        raise ConfigError("explicit mesh needs a subdomains list", mesh.where("subdomains"))
    out = []
    for sub in subs:
        if not isinstance(sub, dict):
            raise ConfigError("each subdomain must be a mapping", mesh.where("subdomains"))
        kind_s = sub.get("kind")
        if kind_s not in (BOUNDED, UNBOUNDED):
            raise ConfigError("subdomain kind must be bounded or unbounded", sub.where("kind"))
        mat = sub.get("material", next(iter(materials)))
        if mat not in materials:
            raise ConfigError(f"unknown material {mat!r}", sub.where("material"))
        elements = sub.get("elements")
        if not isinstance(elements, list) or not elements:
            raise ConfigError("subdomain needs a list of elements (node id lists)", sub.where("elements"))
        for el in elements:
            if not isinstance(el, list) or len(el) < 2 or any(n not in coords for n in el):
                raise ConfigError(f"element {el!r} must list at least two known node ids", sub.where("elements"))
        center = sub.get("center")
        if center is not None and not (isinstance(center, list) and len(center) == 2):
            raise ConfigError("center must be [x, y]", sub.where("center"))
        radial = _section(sub, "radial")
        default_xi = DEFAULT_XI_BOUNDED if kind_s == BOUNDED else DEFAULT_XI_UNBOUNDED
        damp = _section(sub, "damping")
        zeta = materials[mat].damping_ratio
        dkind = damp.get("kind", "constant")
        if dkind not in ("constant", "linear"):
            raise ConfigError("damping.kind must be constant or linear", damp.where("kind"))
        out.append({
            "kind": kind_s,
            "material": mat,
            "elements": [list(el) for el in elements],
            "center": center,
            "xi_start": _get(radial, "xi_start", default=default_xi),
            "n_steps": _get(radial, "n_steps", int, default=100, check=lambda v: v >= 2, what="must be >= 2"),
            "damping": (dkind, _get(damp, "start", default=zeta), _get(damp, "end", default=zeta)),
            "damping_form": damp.get("form", "scaled"),
            "line": sub.line,
        })
    return {"type": "explicit", "nodes": coords, "subdomains": out}


def _explicit_mesh(spec, materials, n_steps=None):
    coords = spec["nodes"]
    subs = []
    for k, sub in enumerate(spec["subdomains"]):
        elements = [BoundaryElement(tuple(ids), np.array([coords[i] for i in ids])) for ids in sub["elements"]]
        grid = RadialGrid(sub["xi_start"], 1.0, n_steps or sub["n_steps"])
        kind, z0, z1 = sub["damping"]
        damping = DampingProfile(kind, z0, z1)
        try:
            subs.append(Subdomain(sub["kind"], sub["center"], elements, materials[sub["material"]], grid,
                                  damping, name=f"subdomain{k}", damping_form=sub["damping_form"]))
        except ValueError as exc:
            raise ConfigError(f"subdomain {k}: {exc}", sub["line"]) from None
    return Mesh(subs)
