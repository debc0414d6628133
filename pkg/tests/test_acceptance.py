"""Acceptance criteria, one test per criterion, each printing a
pass/fail line. Criterion 9 re-runs the whole battery with the same
seed and demands byte-identical canonical JSON.

Each criterion function is pure given its seed and returns a
JSON-able payload; the tests assert on the payload and stash it for
the determinism comparison.
"""

import json
import random
import time

from fk_picard.curves import (Legendre, ShortW, j_invariant,
                              quadratic_twist)
from fk_picard.field import Field, is_prime
from fk_picard.families import (FAMILY_B_DEFAULT_PRIMES, family_b_admissible,
                                family_b_check, family_c_admissible,
                                family_c_check, mobius_branch_check,
                                primes_in, tau_identity_check,
                                tau_pullback_matrix)
from fk_picard.kani import (FKData, classify_fk, neg_phi, sample_fk_data,
                            sigma_census, square_degree_witnesses)
from fk_picard.ledger import (RankLedger, ih11_dim, is_extremal,
                              is_picard_maximal, mw_rank)
from fk_picard.pairing import make_torsion_basis, point_from_coords, weil_pairing

SEED = 20250809
_first_run = {}


def _report(num, ok, detail):
    print(f"[criterion {num}] {'PASS' if ok else 'FAIL'} - {detail}")


# ------------------------------------------------------------------
# 1. quadratic-residue corollary core (< 1 s)
# ------------------------------------------------------------------

def criterion_1():
    bad = []
    for n in range(3, 1000, 4):
        if is_prime(n) and square_degree_witnesses(n) != []:
            bad.append(n)
    return {"three_mod_four_failures": bad,
            "witnesses_n5": [list(w) for w in square_degree_witnesses(5)]}


def test_criterion_1():
    t0 = time.time()
    payload = criterion_1()
    elapsed = time.time() - t0
    _first_run["1"] = payload
    ok = (payload["three_mod_four_failures"] == []
          and payload["witnesses_n5"] == [[1, 2], [4, 2]])
    _report(1, ok, f"square-degree witnesses, primes < 1000 ({elapsed:.2f}s)")
    assert ok
    assert elapsed < 1.0


# ------------------------------------------------------------------
# 2. n = 2 census: all five nontrivial sigma irreducible (< 10 s)
# ------------------------------------------------------------------

def _census_curves():
    rng = random.Random(SEED)
    primes = [p for p in range(11, 98) if is_prime(p)]
    curves = []
    while len(curves) < 10:
        p = rng.choice(primes)
        field = Field.prime(p)
        lam = field.element(rng.randrange(2, p - 1))
        if lam.lift() in (0, 1):
            continue
        E = Legendre(lam)
        if j_invariant(E).lift() in (0, 1728 % p):
            continue
        if (p, lam.lift()) in [(c[0], c[1]) for c in curves]:
            continue
        curves.append((p, lam.lift()))
    return curves


def criterion_2():
    results = []
    for p, lam in _census_curves():
        E = Legendre(Field.prime(p).element(lam))
        census = sigma_census(E, 2)
        reducible = [v for v in census.verdicts
                     if v.classification and v.classification.is_reducible]
        results.append({
            "p": p, "lambda": lam,
            "irreducible": census.irreducible_count,
            "reducible": census.reducible_count,
            "reducible_phi": [list(r) for r in reducible[0].phi_matrix]
            if reducible else None,
        })
    return {"census": results}


def test_criterion_2():
    t0 = time.time()
    payload = criterion_2()
    elapsed = time.time() - t0
    _first_run["2"] = payload
    ok = all(r["irreducible"] == 5 and r["reducible"] == 1
             and r["reducible_phi"] == [[1, 0], [0, 1]]
             for r in payload["census"])
    ok = ok and len(payload["census"]) == 10
    _report(2, ok, f"n=2 census on 10 curves: 5 irreducible + identity "
                   f"({elapsed:.2f}s)")
    assert ok
    assert elapsed < 10.0


# ------------------------------------------------------------------
# 3. phi / -phi classify identically, 50 random FK data (< 60 s)
# ------------------------------------------------------------------

def criterion_3():
    rng = random.Random(SEED)
    schedule = [(2, 31), (3, 11), (5, 5), (7, 3)]
    results = []
    for n, count in schedule:
        for _ in range(count):
            data = sample_fk_data(rng, n)
            v1 = classify_fk(data).verdict
            v2 = classify_fk(FKData(data.E, data.E_prime, n,
                                    neg_phi(data.phi))).verdict
            results.append({"n": n, "p": data.p,
                            "matrix": [list(r) for r in data.phi.matrix],
                            "verdict": v1, "neg_verdict": v2})
    return {"classifications": results}


def test_criterion_3():
    t0 = time.time()
    payload = criterion_3()
    elapsed = time.time() - t0
    _first_run["3"] = payload
    rows = payload["classifications"]
    ok = (len(rows) == 50
          and all(r["verdict"] == r["neg_verdict"] for r in rows)
          and {r["n"] for r in rows} == {2, 3, 5, 7})
    _report(3, ok, f"50 FK data across n in {{2,3,5,7}}, phi vs -phi "
                   f"({elapsed:.1f}s)")
    assert ok
    assert elapsed < 60.0


# ------------------------------------------------------------------
# 4. family B exact trace identity (< 60 s)
# ------------------------------------------------------------------

def criterion_4():
    rows = []
    for p in FAMILY_B_DEFAULT_PRIMES:
        field = Field.prime(p)
        for tv in range(p):
            t = field.element(tv)
            if not family_b_admissible(t):
                continue
            rep = family_b_check(t)
            rows.append({"p": p, "t": tv,
                         "count": rep.count_main,
                         "a_q": rep.trace_q1, "a_e": rep.trace_q2,
                         "ok": rep.checks_passed})
    regression = next(r for r in rows if r["p"] == 5 and r["t"] == 0)
    return {"fibers": rows, "regression": regression}


def test_criterion_4():
    t0 = time.time()
    payload = criterion_4()
    elapsed = time.time() - t0
    _first_run["4"] = payload
    reg = payload["regression"]
    ok = (all(r["ok"] for r in payload["fibers"])
          and reg["count"] == 0 and reg["a_q"] == 2 and reg["a_e"] == -2)
    _report(4, ok, f"family B: {len(payload['fibers'])} fibers, "
                   f"#X = p+1-3a(Q) exact ({elapsed:.1f}s)")
    assert ok
    assert elapsed < 60.0


# ------------------------------------------------------------------
# 5. family C bisection identity, >= 200 fibers with p <= 200 (< 60 s)
# ------------------------------------------------------------------

def criterion_5():
    rows = []
    for p in primes_in(5, 200):
        field = Field.prime(p)
        for tv in range(p):
            t = field.element(tv)
            if not family_c_admissible(t):
                continue
            rep = family_c_check(t)
            rows.append({"p": p, "t": tv, "ok": rep.checks_passed,
                         "a1": rep.trace_q1, "a2": rep.trace_q2})
    ones = [r for r in rows if r["p"] % 4 == 1]
    return {"total": len(rows),
            "all_ok": all(r["ok"] for r in rows),
            "p1mod4_trace_equal": all(r["a1"] == r["a2"] for r in ones),
            "p1mod4_count": len(ones)}


def test_criterion_5():
    t0 = time.time()
    payload = criterion_5()
    elapsed = time.time() - t0
    _first_run["5"] = payload
    ok = (payload["total"] >= 200 and payload["all_ok"]
          and payload["p1mod4_trace_equal"] and payload["p1mod4_count"] > 0)
    _report(5, ok, f"family C: {payload['total']} fibers, bisection identity "
                   f"exact ({elapsed:.1f}s)")
    assert ok
    assert elapsed < 60.0


# ------------------------------------------------------------------
# 6. tau and Moebius identities (< 5 s)
# ------------------------------------------------------------------

def criterion_6():
    rng = random.Random(SEED)
    tau_ok = 0
    tau_total = 0
    while tau_total < 100:
        p = rng.choice((13, 17, 29, 37, 53, 101))
        field = Field.prime(p)
        t = field.element(rng.randrange(2, p - 1))
        if not family_c_admissible(t):
            continue
        u = field.element(rng.randrange(1, p))
        tau_total += 1
        if tau_identity_check(t, u):
            tau_ok += 1
    mob_ok = 0
    mob_total = 0
    while mob_total < 20:
        p = rng.choice((13, 17, 29, 37))
        field = Field.prime(p)
        t = field.element(rng.randrange(2, p - 1))
        if t.is_zero() or t == field.element(-1):
            continue
        mob_total += 1
        if mobius_branch_check(t):
            mob_ok += 1
    F13 = Field.prime(13)
    M = tau_pullback_matrix(F13)
    i = M[0][1]
    entry_ok = (M[0][0].is_zero() and M[1][1].is_zero()
                and M[1][0] == i and i * i == F13.element(-1))
    square_ok = True
    sq00 = M[0][0] * M[0][0] + M[0][1] * M[1][0]
    sq01 = M[0][0] * M[0][1] + M[0][1] * M[1][1]
    square_ok = sq00 == F13.element(-1) and sq01.is_zero()
    return {"tau_identity": tau_ok, "mobius": mob_ok,
            "matrix_entry": entry_ok, "matrix_square": square_ok}


def test_criterion_6():
    t0 = time.time()
    payload = criterion_6()
    elapsed = time.time() - t0
    _first_run["6"] = payload
    ok = (payload["tau_identity"] == 100 and payload["mobius"] == 20
          and payload["matrix_entry"] and payload["matrix_square"])
    _report(6, ok, f"tau + Moebius identities ({elapsed:.2f}s)")
    assert ok
    assert elapsed < 5.0


# ------------------------------------------------------------------
# 7. pairing suite over >= 5 curves per level (< 30 s)
# ------------------------------------------------------------------

def _pairing_curves(n):
    if n == 2:
        return [Legendre(Field.prime(p).element(lam))
                for p, lam in ((11, 3), (13, 6), (17, 5), (19, 10), (23, 7))]
    if n == 3:
        return [Legendre(Field.prime(p).element(lam))
                for p, lam in ((7, 3), (13, 2), (13, 6), (13, 7), (31, 2))]
    if n == 5:
        return [Legendre(Field.prime(p).element(lam))
                for p, lam in ((11, 2), (11, 6), (13, 2), (13, 7), (19, 2))]
    # n = 7: quadratic twists of the supersingular y^2 = x^3 + x
    field = Field.prime(419)
    base = ShortW(field.one, field.zero)
    twists = [base]
    for d in (2, 3, 5, 7):
        twists.append(quadratic_twist(base, field.element(d)))
    return twists


def criterion_7():
    results = []
    for n in (2, 3, 5, 7):
        curves = _pairing_curves(n)
        assert len(curves) >= 5
        for E in curves:
            basis = make_torsion_basis(E, n)
            C, zeta = basis.curve, basis.zeta
            one = C.field.one
            bilinear = True
            for a in range(n):
                R = point_from_coords(basis, a, 0)
                if weil_pairing(C, n, R, basis.Q) != zeta ** a:
                    bilinear = False
                S = point_from_coords(basis, 0, a)
                if weil_pairing(C, n, basis.P, S) != zeta ** a:
                    bilinear = False
            alternating = weil_pairing(C, n, basis.P, basis.P) == one
            skew = (weil_pairing(C, n, basis.P, basis.Q)
                    * weil_pairing(C, n, basis.Q, basis.P)) == one
            primitive = (zeta ** n == one
                         and all(zeta ** m != one for m in range(1, n)))
            results.append({"n": n, "p": C.field.p, "degree": C.field.k,
                            "bilinear": bilinear, "alternating": alternating,
                            "skew": skew, "primitive": primitive})
    counts = {}
    for n in (2, 3, 5, 7):
        counts[str(n)] = sum(
            1 for a in range(n) for b in range(n) for c in range(n)
            for d in range(n) if (a * d - b * c) % n == (n - 1) % n)
    return {"bases": results, "anti_isometry_counts": counts}


def test_criterion_7():
    t0 = time.time()
    payload = criterion_7()
    elapsed = time.time() - t0
    _first_run["7"] = payload
    ok = all(r["bilinear"] and r["alternating"] and r["skew"] and r["primitive"]
             for r in payload["bases"])
    ok = ok and payload["anti_isometry_counts"] == {
        "2": 6, "3": 24, "5": 120, "7": 336}
    ok = ok and all(
        sum(1 for r in payload["bases"] if r["n"] == n) >= 5
        for n in (2, 3, 5, 7))
    _report(7, ok, f"pairing suite on {len(payload['bases'])} bases "
                   f"({elapsed:.1f}s)")
    assert ok
    assert elapsed < 30.0


# ------------------------------------------------------------------
# 8. ledger identities on 1000 random consistent ledgers (< 1 s)
# ------------------------------------------------------------------

def criterion_8():
    rng = random.Random(SEED)
    identity_ok = forward_ok = converse_ok = 0
    for _ in range(1000):
        excess = rng.randrange(0, 10)
        fibers = []
        remaining = excess
        while remaining > 0:
            m = rng.randrange(1, remaining + 1)
            fibers.append(m + 1)
            remaining -= m
        fibers += [1] * rng.randrange(0, 3)
        rho = 2 + excess + rng.randrange(0, 6)
        h11 = rho + rng.randrange(0, 6)
        ledger = RankLedger(h11, rho, tuple(fibers))
        if ih11_dim(ledger) - mw_rank(ledger) == h11 - rho >= 0:
            identity_ok += 1
        if not is_extremal(ledger) or mw_rank(ledger) == 0:
            forward_ok += 1
        if not is_picard_maximal(ledger) or (
                is_extremal(ledger) == (mw_rank(ledger) == 0)):
            converse_ok += 1
    return {"identity": identity_ok, "forward": forward_ok,
            "converse": converse_ok}


def test_criterion_8():
    t0 = time.time()
    payload = criterion_8()
    elapsed = time.time() - t0
    _first_run["8"] = payload
    ok = payload == {"identity": 1000, "forward": 1000, "converse": 1000}
    _report(8, ok, f"1000 random ledgers, rank identities ({elapsed:.2f}s)")
    assert ok
    assert elapsed < 1.0


# ------------------------------------------------------------------
# 9. determinism: the battery twice, byte-identical canonical JSON
# ------------------------------------------------------------------

BATTERY = {
    "1": criterion_1, "2": criterion_2, "3": criterion_3, "4": criterion_4,
    "5": criterion_5, "6": criterion_6, "7": criterion_7, "8": criterion_8,
}


def _canonical(payloads):
    return json.dumps(payloads, sort_keys=True, separators=(",", ":"))


def test_criterion_9_determinism():
    first = dict(_first_run)
    if set(first) != set(BATTERY):
        first = {name: fn() for name, fn in BATTERY.items()}
    second = {name: fn() for name, fn in BATTERY.items()}
    ok = _canonical(first) == _canonical(second)
    _report(9, ok, "criteria 1-8 re-run is byte-identical")
    assert ok
