# Pydantic schemas package
from .certificate import Certificate, GottesmanMochonCertificate, UkCertificate
from .survey import ShardCounts, SurveyReport

__all__ = [
    "Certificate",
    "GottesmanMochonCertificate",
    "ShardCounts",
    "SurveyReport",
    "UkCertificate",
]
