"""Seeded shape generators, small-shape enumerators and the shape file formats.

Every random choice is drawn from ``numpy.random.Generator(PCG64(seed))``,
so a generator spec reproduces the same point set on every platform that
implements PCG64 (XSL-RR 128/64).

File formats:

* JSON: ``{"points": [[x, y], ...]}``
* ASCII grid: ``#`` marks a point, ``.`` an empty cell, the first line is
  the top row (largest y). Blank lines and trailing whitespace are ignored.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .lattice_core import (
    EmptyShapeError,
    Shape,
    ShapeError,
    as_shape,
    hull_of_points,
    is_digital_convex,
    is_hv_convex,
    is_parallelogram_free,
    is_polyomino,
    normalize,
    polygon_lattice_points,
)

CLASSES = ("segment", "rectangle", "hv_convex", "digital_convex", "parallelogram_free", "random_polyomino")


class ShapeSyntaxError(ShapeError):
    code = "syntax"


class GenerationError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def parse_json(text: str) -> Shape:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeSyntaxError(f"malformed JSON: {exc}") from None
    if isinstance(data, dict):
        if "points" not in data:
            raise ShapeSyntaxError('JSON object has no "points" key')
        data = data["points"]
    if not isinstance(data, list):
        raise ShapeSyntaxError("points must be a list of [x, y] pairs")
    pts = []
    for item in data:
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise ShapeSyntaxError(f"bad point {item!r}; expected [x, y] with integer coordinates")
        pts.append((item[0], item[1]))
    if not pts:
        raise EmptyShapeError("shape has no points")
    return Shape(pts)


def parse_ascii(text: str) -> Shape:
    lines = [ln.rstrip() for ln in text.splitlines()]
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    pts = []
    top = len(lines) - 1
    for r, line in enumerate(lines):
        for c, ch in enumerate(line):
            if ch == "#":
                pts.append((c, top - r))
            elif ch not in ". ":
                raise ShapeSyntaxError(f"unexpected character {ch!r} at line {r + 1}, column {c + 1}")
    if not pts:
        raise EmptyShapeError("grid contains no '#' cells")
    return Shape(pts)


def parse_shape(text: str, fmt: Optional[str] = None) -> Shape:
    """Parse either format; without ``fmt`` the format is sniffed."""
    if fmt is None:
        stripped = text.lstrip()
        fmt = "json" if stripped[:1] in ("{", "[") else "ascii"
    if fmt == "json":
        return parse_json(text)
    if fmt == "ascii":
        return parse_ascii(text)
    raise ValueError(f"unknown shape format {fmt!r}")


def serialize_json(shape) -> str:
    shape = as_shape(shape)
    return json.dumps({"points": [list(p) for p in shape.points_list()]})


def serialize_ascii(shape) -> str:
    shape = normalize(shape)
    xmin, ymin, xmax, ymax = shape.bbox
    grid = [["."] * (xmax + 1) for _ in range(ymax + 1)]
    for x, y in shape.points_list():
        grid[ymax - y][x] = "#"
    return "\n".join("".join(row) for row in grid) + "\n"


def load_shape(path) -> Shape:
    path = Path(path)
    text = path.read_text()
    fmt = "json" if path.suffix.lower() == ".json" else None
    return parse_shape(text, fmt)


def save_shape(shape, path) -> None:
    path = Path(path)
    text = serialize_json(shape) + "\n" if path.suffix.lower() == ".json" else serialize_ascii(shape)
    path.write_text(text)


def shape_hash(shape) -> str:
    """sha256 of the translation-normalized JSON form."""
    return hashlib.sha256(serialize_json(normalize(shape)).encode()).hexdigest()


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenSpec:
    cls: str
    n: int = 1
    seed: int = 0
    width: Optional[int] = None
    height: Optional[int] = None

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise ValueError(f"unknown shape class {self.cls!r}; choose from {', '.join(CLASSES)}")
        if self.cls == "rectangle":
            if not self.width or not self.height or self.width < 1 or self.height < 1:
                raise ValueError("rectangle needs width >= 1 and height >= 1")
        elif self.n < 1:
            raise ValueError("size must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, data: dict) -> "GenSpec":
        return cls(**data)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def segment(n: int) -> Shape:
    return Shape([(i, 0) for i in range(n)])


def rectangle(width: int, height: int) -> Shape:
    return Shape([(x, y) for x in range(width) for y in range(height)])


def _hv_convex_rows(n, height, width, step, turn_l, turn_r, rng):
    rows = [(0, width - 1)]
    total = width
    while total < n and len(rows) < height:
        l, r = rows[-1]
        l_down = len(rows) < turn_l
        r_up = len(rows) < turn_r
        dl = int(rng.integers(0, step + 1))
        dr = int(rng.integers(0, step + 1))
        nl = l - dl if l_down else l + dl
        nr = r + dr if r_up else r - dr
        nl = min(nl, r)
        nr = max(nr, l)
        if nl > nr:
            nr = nl
        need = n - total
        if nr - nl + 1 > need:
            # shrink the last row inside [nl, nr] while keeping the overlap
            nl = min(max(nl, l), nr - need + 1)
            nr = nl + need - 1
        rows.append((nl, nr))
        total += nr - nl + 1
    return rows, total


def _hv_convex(n: int, rng: np.random.Generator, retries: int = 64) -> Shape:
    # Rows are stacked bottom-up. Left ends follow a valley (non-increasing,
    # then non-decreasing) and right ends a peak, so every column meets the
    # set in an interval; consecutive rows overlap, so it is 4-connected.
    height = max(1, int(math.exp(rng.uniform(0.0, math.log(n)))) if n > 1 else 1)
    mean_width = n / height
    step = max(1, int(round(2 * mean_width / height)))
    width = max(1, min(n, int(rng.integers(1, max(1, int(mean_width)) + 1))))
    for _ in range(retries):
        turn_l = int(rng.integers(0, height))
        turn_r = int(rng.integers(0, height))
        rows, total = _hv_convex_rows(n, height, width, step, turn_l, turn_r, rng)
        if total == n:
            break
        # too thin for the chosen height: widen and try again
        width = min(n, 2 * width)
        step += 1
    else:
        raise GenerationError(f"hv_convex generation did not reach n = {n}")
    pts = [(x, y) for y, (l, r) in enumerate(rows) for x in range(l, r + 1)]
    if rng.random() < 0.5:
        pts = [(y, x) for x, y in pts]
    return Shape(pts)


def _disc_template(rng: np.random.Generator, k: int) -> np.ndarray:
    ang = rng.uniform(0.0, 2 * math.pi, size=k)
    rad = np.sqrt(rng.uniform(0.0, 1.0, size=k))
    aspect = math.exp(rng.uniform(-0.7, 0.7))
    return np.stack([rad * np.cos(ang) * aspect, rad * np.sin(ang) / aspect], axis=1)


def _fill(template: np.ndarray, radius: float, shear: int) -> np.ndarray:
    pts = np.rint(template * radius).astype(np.int64)
    pts[:, 0] += shear * pts[:, 1]
    hull = hull_of_points(pts.tolist())
    return polygon_lattice_points(hull)


def _digital_convex(n: int, rng: np.random.Generator, retries: int = 64) -> Shape:
    if n <= 2:
        return segment(n)
    lo, hi = 0.8 * n, 1.2 * n
    for _ in range(retries):
        template = _disc_template(rng, int(rng.integers(5, 25)))
        shear = int(rng.integers(-2, 3))
        radius = math.sqrt(n / math.pi) + 1.0
        for _ in range(40):
            pts = _fill(template, radius, shear)
            m = pts.shape[0]
            if lo <= m <= hi:
                return Shape._from_sorted(pts)
            # lattice count grows roughly with radius squared
            radius *= math.sqrt(n / max(m, 1)) if m > 1 else 1.5
            radius *= 1.0 + 0.02 * (rng.random() - 0.5)
    raise GenerationError(f"no digital convex set within 20% of n = {n} after {retries} templates")


def _parallelogram_free(n: int, rng: np.random.Generator, retries: int = 200) -> Shape:
    pts: List[Tuple[int, int]] = [(0, 0)]
    diffs = set()
    box = max(2, n)
    failures = 0
    while len(pts) < n:
        c = (int(rng.integers(0, box)), int(rng.integers(0, box)))
        new = []
        ok = c not in pts
        if ok:
            for p in pts:
                d = (c[0] - p[0], c[1] - p[1])
                nd = (-d[0], -d[1])
                if d in diffs or nd in diffs or d in new or nd in new:
                    ok = False
                    break
                new.append(d)
        if ok:
            pts.append(c)
            for d in new:
                diffs.add(d)
                diffs.add((-d[0], -d[1]))
            failures = 0
        else:
            failures += 1
            if failures > retries:
                box *= 2
                failures = 0
                if box > 1 << 40:
                    raise GenerationError("parallelogram-free insertion did not converge")
    return Shape(pts)


def _random_polyomino(n: int, rng: np.random.Generator) -> Shape:
    cells = [(0, 0)]
    occupied = {(0, 0)}
    while len(cells) < n:
        x, y = cells[int(rng.integers(0, len(cells)))]
        dx, dy = ((1, 0), (-1, 0), (0, 1), (0, -1))[int(rng.integers(0, 4))]
        c = (x + dx, y + dy)
        if c not in occupied:
            occupied.add(c)
            cells.append(c)
    return Shape(cells)


_PREDICATES = {
    "segment": lambda s: is_digital_convex(s),
    "rectangle": lambda s: is_hv_convex(s) and is_digital_convex(s),
    "hv_convex": lambda s: is_polyomino(s) and is_hv_convex(s),
    "digital_convex": is_digital_convex,
    "parallelogram_free": is_parallelogram_free,
    "random_polyomino": is_polyomino,
}


def generate(spec: GenSpec) -> Shape:
    rng = _rng(spec.seed)
    if spec.cls == "segment":
        shape = segment(spec.n)
    elif spec.cls == "rectangle":
        shape = rectangle(spec.width, spec.height)
    elif spec.cls == "hv_convex":
        shape = _hv_convex(spec.n, rng)
    elif spec.cls == "digital_convex":
        shape = _digital_convex(spec.n, rng)
    elif spec.cls == "parallelogram_free":
        shape = _parallelogram_free(spec.n, rng)
    else:
        shape = _random_polyomino(spec.n, rng)
    shape = normalize(shape)
    if not _PREDICATES[spec.cls](shape):
        raise GenerationError(f"generated {spec.cls} shape fails its class predicate ({spec})")
    return shape


def seed_sequence(master: int, count: int) -> List[int]:
    """Independent 64-bit seeds derived from one master seed."""
    ss = np.random.SeedSequence(master)
    return [int(s) for s in ss.generate_state(count, dtype=np.uint64)]


@dataclass
class CorpusEntry:
    id: str
    spec: GenSpec
    shape: Shape
    sha256: str


def build_corpus(specs: Iterable[GenSpec], prefix: str = "shape") -> List[CorpusEntry]:
    out = []
    for i, spec in enumerate(specs):
        shape = generate(spec)
        out.append(CorpusEntry(f"{prefix}-{i:05d}", spec, shape, shape_hash(shape)))
    return out


def corpus_manifest(entries: Sequence[CorpusEntry]) -> dict:
    return {
        "prng": "PCG64",
        "shapes": [
            {"id": e.id, "spec": e.spec.to_dict(), "n": e.shape.n, "sha256": e.sha256} for e in entries
        ],
    }


def write_corpus(entries: Sequence[CorpusEntry], directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for e in entries:
        save_shape(e.shape, directory / f"{e.id}.json")
    path = directory / "manifest.json"
    path.write_text(json.dumps(corpus_manifest(entries), indent=2) + "\n")
    return path


def read_corpus(path) -> List[Tuple[str, Shape]]:
    """Shapes of a corpus directory (via its manifest) or a single file."""
    path = Path(path)
    if path.is_dir():
        manifest = path / "manifest.json"
        if manifest.exists():
            data = json.loads(manifest.read_text())
            return [(item["id"], load_shape(path / f"{item['id']}.json")) for item in data["shapes"]]
        files = sorted(p for p in path.iterdir() if p.suffix.lower() in (".json", ".txt", ".grid"))
        return [(p.stem, load_shape(p)) for p in files]
    return [(path.stem, load_shape(path))]


# ---------------------------------------------------------------------------
# enumeration of small shapes
# ---------------------------------------------------------------------------


def _norm_key(points: Iterable[Tuple[int, int]]) -> Tuple[Tuple[int, int], ...]:
    pts = list(points)
    mx = min(p[0] for p in pts)
    my = min(p[1] for p in pts)
    return tuple(sorted((x - mx, y - my) for x, y in pts))


_DIHEDRAL = (
    lambda x, y: (x, y),
    lambda x, y: (-y, x),
    lambda x, y: (-x, -y),
    lambda x, y: (y, -x),
    lambda x, y: (-x, y),
    lambda x, y: (x, -y),
    lambda x, y: (y, x),
    lambda x, y: (-y, -x),
)


def _symmetric_key(points) -> Tuple[Tuple[int, int], ...]:
    return min(_norm_key(f(x, y) for x, y in points) for f in _DIHEDRAL)


def enumerate_polyominoes(max_n: int) -> List[Shape]:
    """All fixed polyominoes (up to translation) with 1..max_n cells."""
    level = {((0, 0),)}
    out = [Shape(list(k)) for k in sorted(level)]
    for _ in range(1, max_n):
        nxt = set()
        for key in level:
            cells = set(key)
            for x, y in key:
                for c in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                    if c not in cells:
                        nxt.add(_norm_key(cells | {c}))
        level = nxt
        out.extend(Shape(list(k)) for k in sorted(level))
    return out


def _is_digital_convex_small(points) -> bool:
    hull = hull_of_points(points)
    return polygon_lattice_points(hull).shape[0] == len(points)


def enumerate_digital_convex(max_n: int, box: Optional[int] = None) -> List[Shape]:
    """Digital convex sets with 1..max_n points fitting in a ``box`` x ``box``
    square, one per class of translations and square symmetries.

    Removing a hull vertex keeps a set digitally convex, so growing by one
    point at a time reaches every such set.
    """
    if box is None:
        box = max(2, min(max_n, 5))
    level = {((0, 0),)}
    out = [Shape([(0, 0)])]
    for _ in range(1, max_n):
        nxt = set()
        for key in level:
            cells = set(key)
            w = max(p[0] for p in key)
            h = max(p[1] for p in key)
            for x in range(w - box + 1, box):
                for y in range(h - box + 1, box):
                    if (x, y) in cells:
                        continue
                    if max(w, x) - min(0, x) >= box or max(h, y) - min(0, y) >= box:
                        continue
                    cand = list(cells) + [(x, y)]
                    if _is_digital_convex_small(cand):
                        nxt.add(_symmetric_key(cand))
        level = nxt
        out.extend(Shape(list(k)) for k in sorted(level))
    return out
