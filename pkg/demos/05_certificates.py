"""Equational certificates: a replayable rewrite trail from the solution to
the instantiated equation, step by positioned step.

Run:  python3 demos/05_certificates.py
"""

import json
from dataclasses import replace

from pdlfix import (
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    classify,
    generate_certificate,
    grouped_rule_ids,
    parse_formula,
    print_formula,
    solve,
    substitute,
)
from pdlfix.certify import Certificate

phi = parse_formula("p & [a](q | (r & X))")
result = classify(phi, "X")
sol = solve(phi, "X")
cert = generate_certificate(sol, padding=result.padding)

print("from:", print_formula(cert.source))
print("to:  ", print_formula(cert.target))
print("to is exactly phi(lambda):", cert.target == substitute(phi, "X", sol.formula))
print()

# One derivation line per group; the rebracketing steps (AA/AO) are
# bookkeeping for binary trees and stay out of the rule-id summary.
print("grouped rule ids:", grouped_rule_ids(cert))
for step in cert.steps:
    print(f"  line {step.group}: {step.rule} {step.direction} at {list(step.path)}")

# The checker is a pure replayer: it validates every stored binding against
# the subterm, so any tampering fails loudly at the exact step.
report = check_certificate(cert)
print()
print("replay:", "accepted" if report.ok else f"rejected ({report.reason})")

tampered_step = replace(cert.steps[3], path=cert.steps[3].path + (9,))
tampered = Certificate(cert.source, cert.target,
                       cert.steps[:3] + (tampered_step,) + cert.steps[4:])
bad = check_certificate(tampered)
print(f"tampered path at step 3: ok={bad.ok}, failed_step={bad.failed_step}")

# Certificates serialize to JSON with all terms in canonical text.
doc = certificate_to_json(cert)
print()
print("first serialized step:", json.dumps(doc["steps"][0]))
assert certificate_from_json(doc) == cert
print("JSON round-trip: ok")
