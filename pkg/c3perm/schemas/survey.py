"""
Survey report schemas.
"""

from typing import List

from pydantic import BaseModel, Field


class ShardCounts(BaseModel):
    """Partial counts of one shard of staircase masks."""
    shard: int
    total: int = 0
    in_c3: int = 0
    semi_clifford_c3: int = 0

    def __add__(self, other: "ShardCounts") -> "ShardCounts":
        return ShardCounts(
            shard=min(self.shard, other.shard),
            total=self.total + other.total,
            in_c3=self.in_c3 + other.in_c3,
            semi_clifford_c3=self.semi_clifford_c3 + other.semi_clifford_c3,
        )


class SurveyReport(BaseModel):
    """Classification counts over staircase Toffoli circuits on n qubits."""
    n: int
    total: int
    in_c3: int
    semi_clifford_c3: int
    non_sc_c3: int
    population: int
    sampled: bool = False
    seed: int = 0
    shard_count: int = 1
    shards: List[ShardCounts] = Field(default_factory=list)
    elapsed: float = 0.0
    note: str = (
        "in_c3 and semi_clifford_c3 are derived counts; only the total number of "
        "staircase forms was published with the original search"
    )
