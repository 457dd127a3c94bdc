"""YAML configuration for verification campaigns.

Example::

    seed: 7
    instances: 200
    triples:
      - name: pauli
        hilbert_dim: 2
        dirac: {diag: [1, -1]}
        algebra_generators: [pauli_x]
        ladder_depth: 5
    dixmier:
      sequence: {circle_dirac: 100000}
      d: 1
      checkpoints: [1000, 10000, 100000]

Matrices are lists of rows.  An entry is a real number, a string such as
``"1.5-2i"``, or an ``[re, im]`` pair.  ``dirac`` is a matrix literal,
``{diag: [...]}`` or ``{circle_dirac: N}``.  Generators are matrix literals
or one of the presets ``full``, ``diagonal``, ``pauli_x``, ``shift``.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .algebra import close_from_generators
from .errors import NotHermitian, ParseError, ValidationError
from .linop import hermitian_part
from .trace import circle_dirac_eigenvalues, geometric_sequence, harmonic_sequence
from .triple import MAX_LADDER_DEPTH, FiniteSpectralTriple

PRESETS = ("full", "diagonal", "pauli_x", "shift")
_IMAG = re.compile(r"^([+-]?)(.*)[ij]$")


@dataclass
class TripleConfig:
    name: str
    hilbert_dim: int
    dirac: np.ndarray = field(repr=False)
    algebra_generators: list = field(repr=False)
    ladder_depth: int = 5
    seed: int = 0


@dataclass
class CampaignConfig:
    triples: list
    seed: int = 0
    instances: int = 200
    dixmier: dict = None
    group_check: dict = None
    source: str = "<config>"


def parse_scalar(value, where):
    if isinstance(value, bool):
        raise ParseError(f"{where}: boolean is not a matrix entry")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            raise ParseError(f"{where}: complex pair must be [re, im], got {value!r}")
        return complex(value[0], value[1])
    if isinstance(value, str):
        text = value.replace(" ", "")
        m = _IMAG.match(text)
        if m and m.group(2) in ("", "+", "-") or (m and re.search(r"[+-]$", m.group(2))):
            # bare unit imaginary such as "i", "-i", "2+i"
            text = text[:-1] + "1j"
        elif m:
            text = text[:-1] + "j"
        try:
            return complex(text)
        except ValueError:
            raise ParseError(f"{where}: cannot parse complex entry {value!r}") from None
    raise ParseError(f"{where}: unsupported entry {value!r}")


def parse_matrix(value, where, dim=None):
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ParseError(f"{where}: matrix must be a nonempty list of rows")
    n = len(value)
    for i, row in enumerate(value):
        if len(row) != n:
            raise ParseError(f"{where}: row {i} has {len(row)} entries, expected {n} (matrix must be square)")
    out = np.array([[parse_scalar(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(value)])
    if dim is not None and n != dim:
        raise ValidationError(f"{where}: matrix is {n}x{n} but hilbert_dim is {dim}")
    return out


def preset_generators(name, dim, where):
    if name == "full":
        gens = []
        for i in range(dim):
            for j in range(dim):
                e = np.zeros((dim, dim), dtype=complex)
                e[i, j] = 1
                gens.append(e)
        return gens
    if name == "diagonal":
        return [np.diag(np.eye(dim)[i]).astype(complex) for i in range(dim)]
    if name == "pauli_x":
        if dim % 2:
            raise ValidationError(f"{where}: pauli_x needs an even hilbert_dim, got {dim}")
        return [np.kron(np.eye(dim // 2), np.array([[0, 1], [1, 0]])).astype(complex)]
    if name == "shift":
        return [np.roll(np.eye(dim), 1, axis=0).astype(complex)]
    raise ParseError(f"{where}: unknown generator preset {name!r} (choose from {', '.join(PRESETS)})")


def parse_dirac(value, dim, where):
    if isinstance(value, dict):
        if "diag" in value:
            diag = [parse_scalar(x, f"{where}.diag[{i}]") for i, x in enumerate(value["diag"])]
            if len(diag) != dim:
                raise ValidationError(f"{where}.diag: {len(diag)} entries for hilbert_dim {dim}")
            mat = np.diag(diag)
        elif "circle_dirac" in value:
            n = int(value["circle_dirac"])
            if 2 * n != dim:
                raise ValidationError(f"{where}.circle_dirac: {n} gives dimension {2 * n}, hilbert_dim is {dim}")
            mat = np.diag(circle_dirac_eigenvalues(n)).astype(complex)
        else:
            raise ParseError(f"{where}: expected a matrix, {{diag: ...}} or {{circle_dirac: N}}")
    else:
        mat = parse_matrix(value, where, dim)
    try:
        return hermitian_part(mat)
    except NotHermitian as exc:
        raise ValidationError(f"{where}: {exc}") from None


def parse_triple(raw, index, defaults):
    where = f"triples[{index}]"
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: expected a mapping")
    for key in ("hilbert_dim", "dirac"):
        if key not in raw:
            raise ParseError(f"{where}: missing field {key!r}")
    dim = raw["hilbert_dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"{where}.hilbert_dim: must be a positive integer, got {dim!r}")
    dirac = parse_dirac(raw["dirac"], dim, f"{where}.dirac")
    gens = []
    for j, g in enumerate(raw.get("algebra_generators") or []):
        gw = f"{where}.algebra_generators[{j}]"
        if isinstance(g, str):
            gens.extend(preset_generators(g, dim, gw))
        else:
            gens.append(parse_matrix(g, gw, dim))
    depth = raw.get("ladder_depth", defaults.get("depth", 5))
    if not isinstance(depth, int) or depth < 0 or depth > MAX_LADDER_DEPTH:
        raise ValidationError(f"{where}.ladder_depth: must be an integer in [0, {MAX_LADDER_DEPTH}], got {depth!r}")
    return TripleConfig(
        name=str(raw.get("name", f"triple{index}")),
        hilbert_dim=dim,
        dirac=dirac,
        algebra_generators=gens,
        ladder_depth=depth,
        seed=int(raw.get("seed", defaults.get("seed", 0))),
    )


def load_config_text(text, source="<config>"):
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ParseError(f"{source}: invalid YAML{loc}: {getattr(exc, 'problem', exc)}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ParseError(f"{source}: top level must be a mapping")
    defaults = {"seed": raw.get("seed", 0), "depth": raw.get("depth", 5)}
    triples = raw.get("triples") or []
    if not isinstance(triples, list):
        raise ParseError(f"{source}: 'triples' must be a list")
    return CampaignConfig(
        triples=[parse_triple(t, i, defaults) for i, t in enumerate(triples)],
        seed=int(raw.get("seed", 0)),
        instances=int(raw.get("instances", 200)),
        dixmier=raw.get("dixmier"),
        group_check=raw.get("group_check"),
        source=source,
    )


def load_config(path):
    """Read and validate a campaign configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return load_config_text(text, str(path))


def build_triple(cfg):
    algebra = close_from_generators(cfg.hilbert_dim, cfg.algebra_generators)
    return FiniteSpectralTriple(algebra, cfg.dirac, name=cfg.name)


def dixmier_sequence(spec, where="dixmier.sequence"):
    """Eigenvalue data ``(dirac_eigenvalues or None, mu)`` for a sequence description.

    ``{circle_dirac: N}`` yields Dirac eigenvalues; ``{harmonic: N}``,
    ``{geometric: {length: N, ratio: r}}`` and inline lists yield a
    singular-value sequence directly.
    """
    if isinstance(spec, list):
        return None, np.array([float(x) for x in spec])
    if isinstance(spec, str):
        parts = spec.split()
        if len(parts) == 2:
            spec = {parts[0]: int(parts[1])}
    if isinstance(spec, dict) and len(spec) == 1:
        (kind, arg), = spec.items()
        if kind == "circle_dirac":
            return circle_dirac_eigenvalues(int(arg)), None
        if kind == "harmonic":
            return None, harmonic_sequence(int(arg))
        if kind == "geometric":
            if isinstance(arg, dict):
                return None, geometric_sequence(int(arg["length"]), float(arg.get("ratio", 0.5)))
            return None, geometric_sequence(int(arg))
    raise ParseError(f"{where}: unsupported sequence description {spec!r}")
