"""Reproduce the named moment tables and cross-check each row numerically.

Power-moment rows (closed form or finite part) are compared with the
subtraction scheme; logarithmic-moment rows (derivative of m_z) with the
direct integral of ln^n x.

Run:  python scripts/reproduce_tables.py [--format json]
"""
import argparse
import json
import sys
from dataclasses import dataclass

from renmoment import distributions as D
from renmoment import log_moments as lm
from renmoment import schemes_numeric as sn
from renmoment.cli import table_rows


@dataclass(frozen=True)
class TableJob:
    name: str
    spec: D.DistributionSpec | None = None


JOBS = (
    TableJob("cauchy-moments"),
    TableJob("levy-moments"),
    TableJob("qexp-moments"),
    TableJob("qgauss-moments"),
    TableJob("negative-moments", D.normal()),
    TableJob("negative-moments", D.student_t(5.0)),
    TableJob("negative-moments", D.laplace(1.0)),
    *(TableJob("log-moments", spec) for spec in (
        D.cauchy(), D.levy(), D.qexponential(1.75), D.qgaussian(2.2), D.normal(), D.student_t(5.0),
        D.laplace(1.0, 0.7))),
)


def cross_check(job: TableJob, spec, order) -> complex:
    if job.name.endswith("log-moments"):
        return complex(lm.log_moment_direct(spec, order).value)
    return complex(sn.subtraction_scheme(spec, order).value)


def run_job(job: TableJob):
    spec, rows = table_rows(job.name, job.spec)
    out = []
    for order, value, formula in rows:
        value = complex(value)
        check = cross_check(job, spec, order)
        out.append({"order": order, "value": value, "cross_check": check, "deviation": abs(value - check),
                    "formula": formula})
    return spec, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "json"), default="text")
    args = parser.parse_args(argv)
    worst = 0.0
    report = []
    for job in JOBS:
        spec, rows = run_job(job)
        worst = max([worst] + [r["deviation"] for r in rows])
        report.append({"table": job.name, "distribution": spec.to_dict(), "rows": rows})
        if args.format == "text":
            params = ", ".join(f"{k}={v:g}" for k, v in spec.params.items())
            print(f"\n{job.name}: {spec.kind}({params})")
            for r in rows:
                v = r["value"]
                print(f"  {r['order']:>3d}  {f'{v.real:+.12g}{v.imag:+.12g}i':>36s}  "
                      f"dev {r['deviation']:.1e}  {r['formula']}")
    if args.format == "json":
        for entry in report:
            for r in entry["rows"]:
                for key in ("value", "cross_check"):
                    r[key] = {"re": r[key].real, "im": r[key].imag}
        print(json.dumps(report, indent=1))
    else:
        print(f"\nlargest deviation between table and numerical cross-check: {worst:.2e}")
    return 0 if worst < 1e-6 else 1


if __name__ == "__main__":
    sys.exit(main())
