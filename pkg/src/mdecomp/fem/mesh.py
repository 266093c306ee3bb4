"""Structured quad4/hex8 meshes and the line-oriented mesh file format.

File layout::

    # comment
    dim nnodes nelems
    id x y [z]            (nnodes lines)
    id n1 n2 n3 n4 [..n8] (nelems lines)

Ids are 0-based; ``#`` starts a comment anywhere on a line.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class MeshError(ValueError):
    """Malformed mesh data or degenerate element geometry."""


NODES_PER_ELEMENT = {2: 4, 3: 8}


@dataclass(frozen=True, eq=False)
class Mesh:
    """Nodal coordinates ``(nnodes, dim)`` and connectivity ``(nelems, 2**dim)``.

    quad4 nodes run counterclockwise; hex8 lists the bottom face
    counterclockwise (seen from above), then the top face in the same order.
    """

    nodes: np.ndarray
    elements: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        elements = np.array(self.elements, dtype=np.int64)
        if nodes.ndim != 2 or nodes.shape[1] not in NODES_PER_ELEMENT:
            raise MeshError(f"nodes must have shape (n, 2) or (n, 3), got {nodes.shape}")
        nen = NODES_PER_ELEMENT[nodes.shape[1]]
        if elements.ndim != 2 or elements.shape[1] != nen:
            raise MeshError(f"{nodes.shape[1]}D elements need {nen} nodes, got shape {elements.shape}")
        if elements.size and (elements.min() < 0 or elements.max() >= len(nodes)):
            raise MeshError("connectivity index out of range")
        nodes.setflags(write=False)
        elements.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "elements", elements)

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def n_dofs(self) -> int:
        return self.nodes.size

    def element_coords(self) -> np.ndarray:
        """Coordinates gathered per element, shape ``(nelems, nen, dim)``."""
        return self.nodes[self.elements]

    def validate(self) -> "Mesh":
        """Raise :class:`MeshError` unless every element has ``det J > 0`` at
        all full-rule quadrature points."""
        from mdecomp.fem.element import gauss_rule, jacobians

        pts, _ = gauss_rule(self.dim, 2)
        coords = self.element_coords()
        for xi in pts:
            det = np.linalg.det(jacobians(coords, xi))
            bad = np.flatnonzero(det <= 0.0)
            if bad.size:
                raise MeshError(f"non-positive Jacobian in element {int(bad[0])}")
        return self


def rectangle_mesh(lx: float, ly: float, nx: int, ny: int,
                   origin=(0.0, 0.0)) -> Mesh:
    """Structured ``nx`` x ``ny`` quad4 mesh of ``[0, lx] x [0, ly]``.

    Node ``(i, j)`` has index ``j * (nx + 1) + i``.
    """
    x = origin[0] + np.linspace(0.0, lx, nx + 1)
    y = origin[1] + np.linspace(0.0, ly, ny + 1)
    X, Y = np.meshgrid(x, y)
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    n0 = (j * (nx + 1) + i).ravel()
    elements = np.column_stack([n0, n0 + 1, n0 + nx + 2, n0 + nx + 1])
    return Mesh(nodes, elements)


def box_mesh(lx: float, ly: float, lz: float, nx: int, ny: int, nz: int) -> Mesh:
    """Structured hex8 mesh of ``[0, lx] x [0, ly] x [0, lz]``."""
    x = np.linspace(0.0, lx, nx + 1)
    y = np.linspace(0.0, ly, ny + 1)
    z = np.linspace(0.0, lz, nz + 1)
    Z, Y, X = np.meshgrid(z, y, x, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    sx, sy = 1, nx + 1
    sz = (nx + 1) * (ny + 1)
    k, j, i = np.meshgrid(np.arange(nz), np.arange(ny), np.arange(nx), indexing="ij")
    n0 = (k * sz + j * sy + i * sx).ravel()
    bottom = [n0, n0 + sx, n0 + sx + sy, n0 + sy]
    top = [b + sz for b in bottom]
    return Mesh(nodes, np.column_stack(bottom + top))


def _data_lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def read_mesh(path) -> Mesh:
    """Parse a mesh file; raises :class:`MeshError` on malformed content."""
    lines = list(_data_lines(Path(path).read_text()))
    if not lines:
        raise MeshError("empty mesh file")
    try:
        dim, nn, ne = (int(v) for v in lines[0].split())
    except ValueError as exc:
        raise MeshError(f"bad header {lines[0]!r}") from exc
    if dim not in NODES_PER_ELEMENT:
        raise MeshError(f"dimension must be 2 or 3, got {dim}")
    if len(lines) != 1 + nn + ne:
        raise MeshError(f"expected {nn} node and {ne} element lines, got {len(lines) - 1} lines")
    nodes = np.full((nn, dim), np.nan)
    elements = np.full((ne, NODES_PER_ELEMENT[dim]), -1, dtype=np.int64)
    try:
        for line in lines[1:1 + nn]:
            parts = line.split()
            if len(parts) != 1 + dim:
                raise MeshError(f"bad node line {line!r}")
            nodes[int(parts[0])] = [float(v) for v in parts[1:]]
        for line in lines[1 + nn:]:
            parts = line.split()
            if len(parts) != 1 + NODES_PER_ELEMENT[dim]:
                raise MeshError(f"bad element line {line!r}")
            elements[int(parts[0])] = [int(v) for v in parts[1:]]
    except (ValueError, IndexError) as exc:
        raise MeshError(f"malformed mesh entry: {exc}") from exc
    if np.isnan(nodes).any() or (elements < 0).any():
        raise MeshError("node or element ids are not a complete 0-based range")
    return Mesh(nodes, elements).validate()


def write_mesh(mesh: Mesh, path) -> None:
    out = [f"{mesh.dim} {mesh.n_nodes} {mesh.n_elements}"]
    for i, x in enumerate(mesh.nodes):
        out.append(" ".join([str(i)] + [format(v, ".17g") for v in x]))
    for e, conn in enumerate(mesh.elements):
        out.append(" ".join(str(v) for v in (e, *conn)))
    Path(path).write_text("\n".join(out) + "\n")
