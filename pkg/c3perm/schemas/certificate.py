"""
Certificate schemas emitted by the command-line front end.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from c3perm.core.config import settings
from c3perm.core.constants import CERTIFICATE_SCHEMA_VERSION


class Certificate(BaseModel):
    """Machine-checkable record of one claim evaluated on echoed inputs."""
    schema_version: int = CERTIFICATE_SCHEMA_VERSION
    claim: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    verdict: bool
    evidence: Dict[str, Any] = Field(default_factory=dict)
    tool: str = Field(default_factory=lambda: settings.PROJECT_NAME)
    tool_version: str = Field(default_factory=lambda: settings.VERSION)
    wall_time: float = 0.0


class UkCertificate(BaseModel):
    """U_k lies in C3 while its inverse is refuted at level k."""
    k: int
    n: int
    gate_count: int
    in_c3: bool
    associativity_witness: Optional[List[int]] = None
    inverse_refuted_at: Optional[int] = None
    top_coordinate: str
    max_nonzero_product_size: int
    route: str
    truth_table_cross_check: Optional[bool] = None

    @property
    def verdict(self) -> bool:
        return self.in_c3 and self.inverse_refuted_at == self.k


class GottesmanMochonCertificate(BaseModel):
    """Clauses checked on the seven-qubit G gate."""
    g_in_c3: bool
    conjugate_x7_not_clifford: bool
    fgf_inverse_equals_u3: bool
    exact_arithmetic: bool = True

    @property
    def verdict(self) -> bool:
        return self.g_in_c3 and self.conjugate_x7_not_clifford and self.fgf_inverse_equals_u3
