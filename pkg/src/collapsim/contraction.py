"""Contraction of two overlapping packets to their common support.

The product of two Gaussian moduli is itself Gaussian-shaped; its mean and
standard deviation define where the product is effectively concentrated.
Collapse replaces both packets by normalized Gaussians with exactly that
mean and width, so the family stays closed and every contraction is
analytic.  Per axis:

    sigma_p^2 = s1^2 s2^2 / (s1^2 + s2^2)
    c_p       = (c1 s2^2 + c2 s1^2) / (s1^2 + s2^2)

The contracted width never exceeds the smaller input width, so repeated
collapses can only narrow a packet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .criterion import CriterionOutcome
from .packets import GaussianPacket, Vec3


@dataclass(frozen=True, slots=True)
class ContractionResult:
    """Both post-collapse packets plus the shared overlap geometry."""

    contracted_1: GaussianPacket
    contracted_2: GaussianPacket
    overlap_center: Vec3
    overlap_sigma: Vec3


def product_gaussian(p1: GaussianPacket, p2: GaussianPacket) -> tuple[Vec3, Vec3]:
    """Mean and width of the Gaussian-shaped product |psi_1||psi_2|, per axis."""
    center = []
    sigma = []
    for c1, c2, s1, s2 in zip(p1.center, p2.center, p1.sigma, p2.sigma):
        ss = s1 * s1 + s2 * s2
        # Exact values satisfy sigma_p <= min(s1, s2) and min(c1, c2) <=
        # c_p <= max(c1, c2); clamp the one-ulp rounding excursions so both
        # invariants hold literally.
        sp = min(s1 * s2 / math.sqrt(ss), s1 if s1 <= s2 else s2)
        cp = (c1 * s2 * s2 + c2 * s1 * s1) / ss
        lo, hi = (c1, c2) if c1 <= c2 else (c2, c1)
        cp = min(max(cp, lo), hi)
        center.append(cp)
        sigma.append(sp)
    return tuple(center), tuple(sigma)


def apply_collapse(
    p1: GaussianPacket,
    p2: GaussianPacket,
    t: float,
    outcome: Optional[CriterionOutcome] = None,
) -> ContractionResult:
    """Contract both packets to the product support at time t.

    Both outputs take the product center and width as a fresh waist at t;
    mass, velocity and phase constant are inherited from the respective
    inputs.  Callers must only invoke this for a fired criterion; passing the
    evaluated ``outcome`` makes that precondition checked.
    """
    if outcome is not None and not outcome.fires:
        raise ValueError("apply_collapse called for a pair whose criterion did not fire")
    center, sigma = product_gaussian(p1, p2)
    contracted = tuple(
        GaussianPacket(
            center=center,
            sigma=sigma,
            velocity=p.velocity,
            mass=p.mass,
            alpha=p.alpha,
            t_ref=t,
        )
        for p in (p1, p2)
    )
    return ContractionResult(
        contracted_1=contracted[0],
        contracted_2=contracted[1],
        overlap_center=center,
        overlap_sigma=sigma,
    )
