"""Published reference values and known disagreements with them.

Values are given to the four decimals they were published with. An ``x`` of ``0.0`` together with a
limit flag stands for the open end (p -> 0 or ab -> 0)."""
from .models import PublishedRow

#: Extrema and spread of the deletion fidelity over p, keyed by ab
PUBLISHED_TABLE1 = (
    PublishedRow(-0.25, 0.2500, 0.0, 0.9375, 1.000, 0.1860, True, False),
    PublishedRow(-0.10, 0.4000, 0.0, 0.9900, 1.000, 0.1684, True, False),
    PublishedRow(0.10, 0.6000, 0.0, 0.9951, 0.995, 0.1244, True, False),
    PublishedRow(0.25, 0.7500, 0.0, 0.9732, 0.958, 0.0763, True, False),
    PublishedRow(0.30, 0.8000, 0.0, 0.9649, 0.931, 0.0577, True, False),
    PublishedRow(0.35, 0.8500, 0.0, 0.9586, 0.886, 0.0384, True, False),
    PublishedRow(0.40, 0.8400, 1.0, 0.9576, 0.809, 0.0212, False, False),
    PublishedRow(0.45, 0.7975, 1.0, 0.9677, 0.654, 0.0211, False, False),
)

#: Extrema of the deletion fidelity over ab, keyed by p
PUBLISHED_TABLE2 = (
    PublishedRow(0.250, 0.0315, -0.5, 0.9970, 0.5, None, False, False),
    PublishedRow(0.500, 0.1295, -0.5, 0.9955, 0.5, None, False, False),
    PublishedRow(0.750, 0.3099, -0.5, 0.9713, 0.5, None, False, False),
    PublishedRow(0.900, 0.4846, -0.5, 0.9636, 0.2691, None, False, False),
    PublishedRow(0.950, 0.5695, -0.5, 0.9783, 0.1730, None, False, False),
    PublishedRow(0.990, 0.6754, -0.5, 0.9951, 0.0720, None, False, False),
    PublishedRow(0.999, 0.7271, -0.5, 0.9995, 0.0224, None, False, False),
    PublishedRow(1.000, 0.7500, -0.5, 1.0, 0.0, None, False, True),
)

PUBLISHED_MINIMAX = 0.9571
PUBLISHED_CROSSOVER_HALF_P = 0.336
PUBLISHED_TILTED_MAXIMUM = 0.975

#: Acceptance bands when comparing against the four-decimal published values
VALUE_TOLERANCE = 1e-3
LOCATION_TOLERANCE = 2e-3
SD_TOLERANCE = 1e-2

NOTES = {
    'retention-fidelity': (
        "Retention fidelity uses 1 - (2 - q - q*)|a|^2|b|^2, which matches simulation; the published form "
        "1 - (2 + q + q*)|a|^2|b|^2 gives 0 instead of 1 at q = 1 where the machine is the identity."
    ),
    'max-formula': (
        "Maximum deletion fidelity is 1 - A + A/(2(1 - 2A)) with A = (ab)^2; the published form without the "
        "factor 2 exceeds 1 (1.00893 at ab = 0.25) and contradicts the published table values."
    ),
    'tilted-maximum': (
        "For a = sqrt(3)/2, b = 1/2 the largest deletion fidelity is 0.9625 at q = 0.69282, not the published 0.975."
    ),
    'table2-p0.25': (
        "At p = 0.25 the maximum over ab is 0.99975 at ab = 0.5; the published 0.9970 looks like transposed digits."
    ),
    'open-end': (
        "Rows flagged as limits are evaluated at the open end of the grid (q = 1 for p -> 0, ab -> 0) and are not attained."
    ),
}

#: Published rows known to disagree beyond VALUE_TOLERANCE, keyed by table and row key
KNOWN_DISCREPANCIES = {
    ('table2', 0.25): 'table2-p0.25',
}


def published_row(rows, key):
    for row in rows:
        if abs(row.key - key) < 1e-12:
            return row
    return None
