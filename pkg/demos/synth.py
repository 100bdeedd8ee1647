"""Synthetic agency-ratings CSV generator shared by the demo scripts.

Produces files in the same shape as the public corporate-ratings exports:
identifier columns, a Sector string column, a Rating column with agency
grades, and financial-ratio columns. Ratios carry class-dependent signal
(liquidity and debt ratios drift with credit quality) plus heavy-tailed
noise, loosely echoing the published summary statistics.
"""

import csv

import numpy as np

RATIO_COLUMNS = (
    "currentRatio", "quickRatio", "cashRatio", "daysOfSalesOutstanding",
    "netProfitMargin", "pretaxProfitMargin", "grossProfitMargin",
    "operatingProfitMargin", "returnOnAssets", "returnOnCapitalEmployed",
    "returnOnEquity", "assetTurnover", "fixedAssetTurnover", "debtEquityRatio",
    "debtRatio", "effectiveTaxRate", "freeCashFlowOperatingCashFlowRatio",
    "freeCashFlowPerShare", "cashPerShare", "companyEquityMultiplier",
    "ebitPerRevenue", "enterpriseValueMultiple", "operatingCashFlowPerShare",
    "operatingCashFlowSalesRatio", "payablesTurnover",
)

# extra ratio names so a generated file can reach 30 feature columns
EXTRA_RATIO_COLUMNS = ("interestCoverage", "inventoryTurnover",
                       "receivablesTurnover", "priceEarningsRatio")

SECTORS = ("Technology", "Energy", "Healthcare", "Consumer", "Industrials",
           "Utilities", "Financials", "Materials")

GRADES = ("AAA", "AA", "A", "BBB", "BB", "B", "CCC", "CC", "C", "D")

# how strongly each named ratio tracks credit quality (higher grade index =
# riskier firm); the rest of the columns are pure noise
SIGNALS = {
    "currentRatio": -0.9,
    "quickRatio": -0.8,
    "cashRatio": -1.1,
    "debtRatio": +1.2,
    "operatingCashFlowSalesRatio": -0.9,
    "cashPerShare": -0.7,
    "operatingCashFlowPerShare": -0.6,
    "returnOnEquity": -0.5,
    "fixedAssetTurnover": -0.5,
    "payablesTurnover": -0.4,
    "netProfitMargin": -0.4,
    "returnOnAssets": -0.3,
    "grossProfitMargin": -0.3,
    "enterpriseValueMultiple": -0.3,
    "effectiveTaxRate": -0.3,
    "assetTurnover": -0.25,
    "daysOfSalesOutstanding": +0.25,
    "returnOnCapitalEmployed": -0.25,
    "freeCashFlowPerShare": -0.2,
    "freeCashFlowOperatingCashFlowRatio": -0.2,
    "operatingProfitMargin": -0.2,
}

# observed rough grade mix in agency data: mostly BBB/BB, thin tails
GRADE_WEIGHTS = (0.01, 0.04, 0.12, 0.30, 0.26, 0.17, 0.06, 0.02, 0.01, 0.01)


def write_synthetic_ratings(path, n_rows=400, seed=0, wide=False):
    """Write a synthetic ratings CSV; returns the list of feature columns."""
    rng = np.random.default_rng(seed)
    ratios = RATIO_COLUMNS + (EXTRA_RATIO_COLUMNS if wide else ())
    grades = rng.choice(len(GRADES), size=n_rows, p=GRADE_WEIGHTS)
    # sector mix mildly correlated with grade so Sector carries signal too
    sector_shift = rng.integers(0, 3, size=n_rows)
    sectors = (grades + sector_shift) % len(SECTORS)
    quality = (grades - 4.5) / 2.0  # centered risk scale
    header = ["Name", "Symbol", "Rating Agency Name", "Date", "Sector", "Rating"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header + list(ratios))
        for i in range(n_rows):
            row = [f"Firm {i}", f"F{i:04d}", "Synthetic Ratings Co",
                   f"201{i % 7}-01-01", SECTORS[sectors[i]], GRADES[grades[i]]]
            for name in ratios:
                signal = SIGNALS.get(name, 0.0) * quality[i]
                value = signal + rng.normal(0.0, 1.0)
                if rng.random() < 0.02:  # sprinkle outliers, heavy tails
                    value *= rng.uniform(5.0, 40.0)
                row.append(repr(float(value)))
            writer.writerow(row)
    return ["Sector"] + list(ratios)
