"""Frozen oracle values shared across the test modules.

Every number here was computed from implementations independent of this
package (scipy.special / scipy.integrate / mpmath quadrature at 40 digits /
dense brute-force grids) and frozen at the oracle's precision. Published
golden values carried as strings keep their printed precision.
"""

# Two-group rows: (name, frr1, frr2, printed irr, printed q,
#                  oracle-solved irr, oracle-solved q)
TABLE_ROWS = [
    ("testicular", 5.88, 21.71, "30.6", "0.010", 30.6138470092, 0.0090124204),
    ("prostate", 2.96, 7.71, "12.2", "0.027", 12.2331135234, 0.0272303691),
    ("colorectal", 2.25, 4.25, "7.4", "0.067", 7.3705753819, 0.0676340143),
    ("melanoma", 1.9, 4.7, "8.2", "0.025", 8.1998722778, 0.0246939154),
    ("breast", 1.80, 2.93, "5.2", "0.10", 5.2254657831, 0.1026190552),
    ("hodgkin", 6.0, 13.0, "22.6", "0.030", 22.6415476937, 0.0296547250),
    ("thyroid", 3.1, 23.2, "34.2", "0.0022", 34.1660403392, 0.0022031604),
]

# Continuous golden set: (name, lifetime risk, frr, gini via mpmath
# quadrature, published gini string, published tolerance)
GINI_CASES = [
    ("parkinson", 0.01, 2.3, 0.553215439821, "0.55", 0.005),
    ("pancreas", 0.015, 2.19, 0.536441318601, "0.54", 0.005),
    ("leukemias", 0.0096, 2.01, 0.503257242799, "0.50", 0.005),
    ("stomach", 0.0178, 1.92, 0.486238750262, "0.49", 0.005),
    ("breast", 0.12, 1.8, 0.471723533167, "0.47", 0.005),
    ("scenario-frr6", 0.01, 6.0, 0.80257508891, "0.80", 0.005),
    ("scenario-frr1.5", 0.01, 1.5, 0.375600693335, "0.37", 0.005),
    ("t1d", 0.002, 12.0, 0.893567631447, "0.89", 0.005),
    ("t2d", 0.30, 2.24, 0.598382574833, "0.60", 0.03),
]

# (lifetime risk, frr, stratum fraction, oracle share, published share)
TOP_SHARE_CASES = [
    (0.01, 1.5, 0.10, 0.254534917181, 0.26),
    (0.01, 6.0, 0.10, 0.644438933904, 0.65),
    (0.12, 1.8, 0.10, 0.299722160639, 0.30),
    (0.002, 12.0, 0.01, 0.248962757182, 0.25),
]

# (0.01, FRR 2.0) reproduces the published middle-scenario 33% share
TOP_SHARE_FRR2_SCENARIO = (0.01, 2.0, 0.10, 0.330224624524)

PARKINSON_ALPHA = 0.7515384615384616   # (1-mu)/(frr-1) - mu at (0.01, 2.3)
PARKINSON_BETA = 74.4023076923077

BREAST_MEAN_RATIO_TOP10 = 3.852041709914   # (0.12, 1.8); published as 6.2
T1D_MEDIAN_RATIO_TOP1 = 8950.217089        # (0.002, 12); published as >10000

IRR_FOR_FRR1_DOUBLING_AT_Q001 = 12.173341194966   # published as 12.2
IRR_FOR_FRR2_DOUBLING_AT_Q001 = 5.571865736737    # published as "larger than 5"
IRR_FOR_FRR1_19_AT_Q05 = 37.9736659610            # frr1 = 1.9 at q = 0.5

LOG_BETA_075_74 = -3.023502410448729   # mpmath: log(beta(0.75, 74))

# KS critical value at the 1% level: 1.62762 / sqrt(n)
KS_CRIT_1PCT = 1.62762


def fitted_shapes(mu, frr):
    """Closed-form beta shapes for (mean risk, FRR) -- oracle-side copy."""
    alpha = (1.0 - mu) / (frr - 1.0) - mu
    return alpha, alpha * (1.0 - mu) / mu
