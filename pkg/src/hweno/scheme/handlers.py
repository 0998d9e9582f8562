# Copyright hweno-solver contributors. All Rights Reserved.

from __future__ import annotations

from typing import Optional, Sequence, Tuple

import numpy as np

from .core import SchemeConfig, SchemeName
from .reconstruct_hweno import SplitFluxPair, reconstruct_interface
from .systems import CharacteristicFrame, project, unproject
from .weno_js_ref import weno5_reconstruct

__all__ = ["HwenoHandler", "WenoJsHandler", "get_scheme_handler"]


class HwenoHandler:
    """
    Interface fluxes of the Hermite WENO scheme. The value flux is reconstructed in
    characteristic variables when a frame is given; the derivative flux is linear and
    computed component by component.
    """

    name = SchemeName.L_HWENO
    offsets: Tuple[int, ...] = (-1, 0, 1, 2)
    evolves_derivatives = True

    def interface_fluxes(
        self,
        f_split: Sequence[SplitFluxPair],
        h_split: Sequence[SplitFluxPair],
        dx: float,
        frame: Optional[CharacteristicFrame],
        config: SchemeConfig,
    ) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        return reconstruct_interface(f_split, h_split, dx, config, frame)


class WenoJsHandler(HwenoHandler):
    """Five-point WENO on the value flux only; derivative data is ignored."""

    name = SchemeName.WENO_JS
    offsets = (-2, -1, 0, 1, 2, 3)
    evolves_derivatives = False

    def interface_fluxes(
        self,
        f_split: Sequence[SplitFluxPair],
        h_split: Sequence[SplitFluxPair],
        dx: float,
        frame: Optional[CharacteristicFrame],
        config: SchemeConfig,
    ) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        plus = project([s.plus for s in f_split[:5]], frame)
        minus = project([s.minus for s in f_split[:0:-1]], frame)
        f_hat = weno5_reconstruct(plus, config.epsilon) + weno5_reconstruct(minus, config.epsilon)
        return unproject([f_hat], frame)[0], None


def get_scheme_handler(scheme: str = SchemeName.L_HWENO) -> HwenoHandler:
    """
    Returns the handler instance for the given scheme.

    Args:
        scheme (str, optional): The scheme to get the handler of. Defaults to "l-hweno".

    Raises:
        ValueError: If the scheme name is not known.
    """
    if SchemeName(scheme) == SchemeName.WENO_JS:
        return WenoJsHandler()
    return HwenoHandler()
