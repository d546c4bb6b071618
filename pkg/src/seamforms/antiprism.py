"""Closed-form reference shape for two regular n-gons glued with a
half-side offset.

Each piece folds along the chords joining consecutive side midpoints: the
midpoint n-gon stays flat and the n corner flaps fold up, so the convex
body is an antiprism over the midpoint polygon.  Its ring radius is the
n-gon inradius and the height follows from the flap sides keeping length
side/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class AntiprismShape:
    n: int
    side: float  # n-gon side length c
    ring_radius: float  # inradius of each glued n-gon
    height: float
    positions: np.ndarray  # (2n, 3): bottom ring 0..n-1, top ring n..2n-1
    faces: np.ndarray  # (4n - 4, 3) triangulated surface
    ring_edges: list  # [(i, j), ...] edges around each flat cap
    lateral_edges: list  # [(i, j), ...] zigzag edges between rings
    ring_dihedral: float  # interior dihedral angle at a ring edge
    ring_deviation: float  # pi - ring_dihedral (0 = flat)

    def diameter(self) -> float:
        d = self.positions[:, None, :] - self.positions[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())


def antiprism_shape(n: int, side: float = 1.0) -> AntiprismShape:
    if n < 3:
        raise ValueError("need n >= 3")
    c = float(side)
    delta = math.pi / n
    rho = 0.5 * c / math.tan(delta)  # inradius of the n-gon
    h2 = 0.25 * c * c - 2.0 * rho * rho * (1.0 - math.cos(delta))
    if h2 <= 0:
        raise ValueError("flap constraint cannot close; shape degenerate")
    h = math.sqrt(h2)

    ang_bot = 2.0 * math.pi * np.arange(n) / n
    ang_top = ang_bot + delta
    bottom = np.stack([rho * np.cos(ang_bot), rho * np.sin(ang_bot), np.zeros(n)], axis=1)
    top = np.stack([rho * np.cos(ang_top), rho * np.sin(ang_top), np.full(n, h)], axis=1)
    pos = np.vstack([bottom, top])

    faces = []
    # caps: fan triangulation (flat, any diagonalization works)
    for k in range(1, n - 1):
        faces.append((0, k + 1, k))  # bottom, outward normal -z
        faces.append((n, n + k, n + k + 1))  # top, outward normal +z
    # lateral band
    for k in range(n):
        kn = (k + 1) % n
        faces.append((k, kn, n + k))  # apex on top ring
        faces.append((kn, n + kn, n + k))  # apex on bottom ring
    faces = np.asarray(faces, dtype=np.int32)

    ring_edges = [(k, (k + 1) % n) for k in range(n)]
    ring_edges += [(n + k, n + (k + 1) % n) for k in range(n)]
    lateral = []
    for k in range(n):
        lateral.append((k, n + k))
        lateral.append(((k + 1) % n, n + k))

    # dihedral at a bottom ring edge between the cap and the lateral face
    a, b = pos[0], pos[1]
    apex = pos[n]
    nrm_cap = np.array([0.0, 0.0, -1.0])
    nrm_lat = np.cross(b - a, apex - a)
    nrm_lat /= np.linalg.norm(nrm_lat)
    # interior dihedral: pi - angle between outward normals
    dev = math.atan2(float(np.linalg.norm(np.cross(nrm_cap, nrm_lat))), float(nrm_cap @ nrm_lat))
    return AntiprismShape(
        n=n,
        side=c,
        ring_radius=rho,
        height=h,
        positions=pos,
        faces=faces,
        ring_edges=ring_edges,
        lateral_edges=lateral,
        ring_dihedral=math.pi - dev,
        ring_deviation=dev,
    )


def seam_vertex_positions(n: int, side: float = 1.0) -> np.ndarray:
    """Positions matched to the seam order of the glued boundary.

    Seam vertex 2k is the k-th corner of piece one (a top-ring point) and
    seam vertex 2k+1 is the following side midpoint (a bottom-ring point);
    both pieces traverse the seam counterclockwise when viewed from piece
    one's outside.
    """
    shape = antiprism_shape(n, side)
    out = np.empty((2 * n, 3))
    out[0::2] = shape.positions[n:]  # corners of piece one fold up
    # the midpoint after corner k sits a half step further around the base
    out[1::2] = shape.positions[(np.arange(n) + 1) % n]
    return out


def ring_deviation_limit() -> float:
    """Deviation of the ring dihedral from flat as n grows: the flap tilts
    approach a 60 degree wedge, not 45."""
    return math.pi / 3.0
