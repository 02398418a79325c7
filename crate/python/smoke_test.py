"""Smoke test for the apery_forge extension module."""

import json
from fractions import Fraction

import apery_forge as af


def main():
    baby = af.parse_laurent("x1^-1*x2^-1*(1-x1)*(1-x2)*(1-x1-x2)", 2)
    a = baby.constant_terms(39)
    assert a[:4] == [1, 3, 19, 147], a[:4]
    assert all(isinstance(v, Fraction) for v in a)

    op = af.fit(a, 4, 2)
    expected = af.DeltaOperator([[0, 3, 1], [0, 11, 2], [-1, 11, 1]])
    assert op.same_up_to_unit(expected), str(op)
    st = json.loads(op.structural_checks(2))
    assert st["mum"] and st["integral"], st

    b = op.second_solution(Fraction(-5), 39)
    value, match = af.limit(a, b)
    assert match == ("zeta(2)", Fraction(1)), match
    assert abs(value - 1.6449340668482264) < 1e-12, value
    assert op.frobenius_eps(30) == 1

    rep = af.certify(af.parse_laurent("-x1 + 3 - 2*x1^-1", 1), q0="2")
    assert rep.verdict == "CERTIFIED-AT-DESK-SCALE", rep.to_json(True)
    assert rep.exit_code == 0
    assert rep.constant == ("log(2/1)", Fraction(1))
    assert json.loads(rep.to_json())["schema"] == "apery-forge/1"

    psi, phi = af.vz(2)
    assert phi.constant_terms(5) == a[:6]
    assert len(json.loads(af.catalog())) >= 7

    try:
        af.parse_laurent("x1 +* 2", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("parse error not raised")
    print("smoke test ok:", rep.verdict, op)


if __name__ == "__main__":
    main()
