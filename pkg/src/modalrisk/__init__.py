"""Graded modal operators for institutional epistemic risk.

Submodules: ``algebra`` (truth degrees), ``frame`` (evidence frames),
``modal`` (operators and statuses), ``formula`` (DSL), ``properties``
(law and bound checks), ``applications`` (worked scenarios),
``governance`` (audit register, rules, revision) and ``cli``.
"""

from .algebra import GODEL, LUKASIEWICZ, PRODUCT, AlgebraPackage, get_package
from .frame import Frame, build_finite_frame, load_frame
from .modal import box, diamond, dual, statuses

__version__ = "0.1.0"

__all__ = ["GODEL", "PRODUCT", "LUKASIEWICZ", "AlgebraPackage", "get_package", "Frame",
           "build_finite_frame", "load_frame", "box", "diamond", "dual", "statuses"]
