"""
Application constants and configuration values.
"""

import math

# Certificate JSON schema version; bump on any incompatible field change
CERTIFICATE_SCHEMA_VERSION = 1

# CLI exit codes
EXIT_VERDICT_TRUE = 0
EXIT_VERDICT_FALSE = 1
EXIT_USAGE_ERROR = 2

# One machine word per F2 row
MAX_F2_DIMENSION = 64

# first_nonzero_index of the zero vector
INFINITY = math.inf

# Degree reported for the zero polynomial, never 0
ZERO_POLY_DEGREE = -math.inf

# Truth tables are materialised only up to this many qubits
MAX_TRUTH_TABLE_QUBITS = 24

# U_k family limits
UK_MIN_K = 2
UK_MAX_ANALYTIC_K = 5
UK_MAX_TRUTH_TABLE_K = 4
UK_VERIFY_MIN_K = 3

# Survey limits
SURVEY_MIN_QUBITS = 3
SURVEY_MAX_EXHAUSTIVE_QUBITS = 6
SURVEY_MAX_QUBITS = 7
WITNESS_QUBITS = 7

# Checkpoint file layout: magic, version, then little-endian fixed-width fields
CHECKPOINT_MAGIC = b"C3SV"
CHECKPOINT_VERSION = 1

# Claim identifiers echoed in certificates
CLAIMS = {
    'poly': 'polynomial-representation',
    'staircase': 'staircase-form',
    'reduce': 'staircase-reduction',
    'mult': 'descending-multiplication',
    'uk': 'uk-in-c3-inverse-refuted',
    'survey': 'no-non-semi-clifford-staircase-c3',
    'verify-gm': 'gottesman-mochon',
    'classify': 'c3-membership',
    'witness': 'non-semi-clifford-witness',
}

# Gate names of the circuit text format and their qubit counts (None = variadic)
GATE_ARITY = {
    'TOF': 3,
    'CNOT': 2,
    'X': 1,
    'Z': 1,
    'H': 1,
    'S': 1,
    'T': 1,
    'CZ': 2,
    'CCZ': 3,
    'CSWAP': 3,
    'MCX': None,
}

# Gates that act as permutations of basis states
PERMUTATION_GATES = ('TOF', 'CNOT', 'X', 'MCX')
