"""Running the built-in corpus and aggregating one report.

Equivalent to `hhbounds corpus --format csv`, done through the library API.
"""

from collections import Counter

from hhbounds import corpus_specs, run_check, serialize_many

reports = [run_check(spec) for spec in corpus_specs()]

print(f"{'spec':>18} {'gap':>10} {'residual':>9} {'certs':>5}  statuses")
for r in reports:
    statuses = Counter(row.status for row in r.rows)
    summary = ", ".join(f"{k}x{v}" for k, v in sorted(statuses.items()))
    certs = "ok" if all(c.passed for c in r.certificates) else "FAIL"
    print(f"{r.spec_id:>18} {r.gap:10.6f} {r.lemma_residual:9.1e} {certs:>5}  {summary}")

violated = sum(
    1 for r in reports for row in r.rows if row.status in ("VIOLATED", "ERROR")
)
print(f"\n{len(reports)} specs, {sum(len(r.rows) for r in reports)} rows, "
      f"{violated} violated or errored")

csv_bytes = serialize_many(reports, "csv")
print("\nfirst lines of the aggregated CSV:")
for line in csv_bytes.decode().splitlines()[:5]:
    print(" ", line)
