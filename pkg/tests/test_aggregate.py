import math

import pytest

import brute
from egyfrac import aggregate, analytic
from egyfrac.aggregate import A3Record
from egyfrac.errors import (
    CacheIntegrityError,
    CapacityError,
    PreconditionError,
    StaleCacheError,
)


@pytest.fixture(scope="module")
def records_300():
    return aggregate.build_records(300)


# ---------------------------------------------------------------------------
# sweeps


def test_build_records_small():
    recs = aggregate.build_records(10)
    assert [r.p for r in recs] == [2, 3, 5, 7]
    r5 = recs[2]
    assert r5 == A3Record(5, 11, 6, 8, 6, True)
    assert recs[0].a3 == 6 and recs[0].sandwich_ok is None
    assert recs[1].a3 == 8 and recs[1].sandwich_ok is None


def test_record_invariants(records_300):
    ps = [r.p for r in records_300]
    assert ps == sorted(ps) and len(set(ps)) == len(ps)
    assert ps == brute.primes_upto(300)
    for r in records_300:
        assert r.overlap12 <= min(r.a3_type1, r.a3_type2)
        # union of the two families can't exceed the oracle count
        assert r.a3_type1 + r.a3_type2 - r.overlap12 <= r.a3
        if r.p >= 5:
            assert r.sandwich_ok is True
            assert r.a3 >= 6  # six trivial members
        else:
            assert r.sandwich_ok is None


def test_types_only_matches_full(records_300):
    light = aggregate.build_records(300, full_oracle=False)
    assert len(light) == len(records_300)
    for a, b in zip(light, records_300):
        assert (a.p, a.a3, a.a3_type1, a.a3_type2, a.overlap12) == (
            b.p,
            b.a3,
            b.a3_type1,
            b.a3_type2,
            b.overlap12,
        )
        assert a.sandwich_ok is None


def test_threads_same_records(records_300):
    assert aggregate.build_records(300, threads=2) == records_300


def test_distinct_mode_records():
    recs = aggregate.build_records(7, distinct=True)
    by_p = {r.p: r for r in recs}
    assert by_p[2].a3 == 3
    assert by_p[5].a3 == 8
    # family columns keep the repeats-allowed sizes
    assert by_p[5].a3_type1 == 6 and by_p[5].a3_type2 == 8
    assert all(r.sandwich_ok is None for r in recs)


def test_type2_column_vs_analytic(records_300):
    upto = [r for r in records_300 if r.p <= 200]
    assert sum(r.a3_type2 for r in upto) == analytic.type2_size_sum(200)


def test_build_records_caps():
    with pytest.raises(PreconditionError):
        aggregate.build_records(1)
    with pytest.raises(CapacityError):
        aggregate.build_records(aggregate.FULL_ORACLE_CAP + 1)
    with pytest.raises(CapacityError):
        aggregate.build_records(aggregate.TYPES_ONLY_CAP + 1, full_oracle=False)
    with pytest.raises(CapacityError):
        aggregate.build_records(aggregate.DISTINCT_CAP + 1, distinct=True)


def test_flags_string():
    assert aggregate.flags_string(True, False) == "full-oracle"
    assert aggregate.flags_string(False, False) == "types-only"
    assert aggregate.flags_string(True, True) == "full-oracle+distinct"
    assert aggregate.flags_string(False, True) == "types-only+distinct"


# ---------------------------------------------------------------------------
# growth report


def test_fit_growth_single_checkpoint():
    recs = aggregate.build_records(2)
    rep = aggregate.fit_growth(recs, [2])
    (cp,) = rep.checkpoints
    assert cp.x == 2 and cp.s == 6
    assert cp.ratio3 == pytest.approx(3.0)
    assert cp.ratio5 == pytest.approx(3.0)
    assert cp.ratio3ll is None
    js = rep.as_json_dict()
    assert js["checkpoints"][0]["ratio3ll"] is None
    assert js["meta"]["log_base"] == 2


def test_fit_growth_cumulative_and_ordered(records_300):
    rep = aggregate.fit_growth(records_300, [4, 16, 64, 256])
    s_prev = 0
    for cp in rep.checkpoints:
        want_s = sum(r.a3 for r in records_300 if r.p <= cp.x)
        want_s1 = sum(r.a3_type1 for r in records_300 if r.p <= cp.x)
        want_s2 = sum(r.a3_type2 for r in records_300 if r.p <= cp.x)
        assert (cp.s, cp.s1, cp.s2) == (want_s, want_s1, want_s2)
        assert cp.s >= s_prev
        s_prev = cp.s
        lg = math.log2(cp.x)
        assert cp.ratio3 == pytest.approx(cp.s / (cp.x * lg**3))
        assert cp.ratio5 <= cp.ratio3ll <= cp.ratio3


def test_fit_growth_validation(records_300):
    with pytest.raises(PreconditionError):
        aggregate.fit_growth(records_300, [])
    with pytest.raises(PreconditionError):
        aggregate.fit_growth(records_300, [16, 8])
    with pytest.raises(PreconditionError):
        aggregate.fit_growth(records_300, [1, 4])


# ---------------------------------------------------------------------------
# cache round-trip and sabotage


def test_cache_roundtrip(tmp_path, records_300):
    path = str(tmp_path / "recs.csv")
    aggregate.cache_store(records_300, path, x=300)
    bundle = aggregate.cache_load(path)
    assert bundle.x == 300
    assert bundle.flags == "full-oracle"
    assert bundle.records == records_300
    # expectations accepted when they match
    aggregate.cache_load(path, expect_x=300, expect_flags="full-oracle")


def test_cache_header_shape(tmp_path, records_300):
    path = str(tmp_path / "recs.csv")
    aggregate.cache_store(records_300, path, x=300)
    lines = open(path).read().splitlines()
    assert lines[0].startswith("# egyfrac-cache v1; x=300; flags=full-oracle; sha256=")
    assert lines[1] == "p,a3,a3_type1,a3_type2,overlap12,sandwich_ok"
    assert lines[2].startswith("2,6,")


def test_cache_expectation_mismatch(tmp_path, records_300):
    path = str(tmp_path / "recs.csv")
    aggregate.cache_store(records_300, path, x=300)
    with pytest.raises(StaleCacheError):
        aggregate.cache_load(path, expect_x=301)
    with pytest.raises(StaleCacheError):
        aggregate.cache_load(path, expect_flags="types-only")


def test_cache_corruption_detected(tmp_path, records_300):
    path = str(tmp_path / "recs.csv")
    aggregate.cache_store(records_300, path, x=300)
    blob = open(path, "rb").read()
    # flip one digit inside the body
    idx = blob.index(b"\n", blob.index(b"\n") + 1) + 3
    bad = blob[:idx] + (b"7" if blob[idx : idx + 1] != b"7" else b"8") + blob[idx + 1 :]
    open(path, "wb").write(bad)
    with pytest.raises(CacheIntegrityError):
        aggregate.cache_load(path)


def test_cache_truncation_detected(tmp_path, records_300):
    path = str(tmp_path / "recs.csv")
    aggregate.cache_store(records_300, path, x=300)
    text = open(path).read()
    open(path, "w").write(text[: text.rstrip().rfind("\n") + 1])
    with pytest.raises(CacheIntegrityError):
        aggregate.cache_load(path)


def test_cache_version_bump_is_stale(tmp_path, records_300):
    path = str(tmp_path / "recs.csv")
    aggregate.cache_store(records_300, path, x=300)
    text = open(path).read()
    open(path, "w").write(text.replace("egyfrac-cache v1;", "egyfrac-cache v2;", 1))
    with pytest.raises(StaleCacheError):
        aggregate.cache_load(path)


def test_cache_not_a_cache(tmp_path):
    path = str(tmp_path / "junk.csv")
    open(path, "w").write("p,a3\n2,6\n")
    with pytest.raises(CacheIntegrityError):
        aggregate.cache_load(path)


def test_cache_distinct_flags_not_served_as_default(tmp_path):
    recs = aggregate.build_records(50, distinct=True)
    path = str(tmp_path / "recs.csv")
    aggregate.cache_store(recs, path, x=50, distinct=True)
    bundle = aggregate.cache_load(path)
    assert bundle.flags == "full-oracle+distinct"
    with pytest.raises(StaleCacheError):
        aggregate.cache_load(path, expect_flags="full-oracle")
