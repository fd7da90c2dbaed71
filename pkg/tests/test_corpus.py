import json
import random

from polybound.bounds import default_constants
from polybound.corpus import (
    CORPUS_RANDOM,
    corpus_hash,
    hypercontractive,
    load_corpus,
    random_instance,
    shipped_corpus_dir,
    shipped_instances,
)


def test_shipped_corpus_matches_generator():
    files = sorted(shipped_corpus_dir().glob("*.json"))
    specs = shipped_instances()
    assert len(files) == len(specs) == 20 + CORPUS_RANDOM
    for path, spec in zip(files, specs):
        assert json.loads(path.read_text()) == json.loads(json.dumps(spec.to_dict()))


def test_hash_matches_manifest():
    assert corpus_hash() == default_constants().corpus_hash


def test_corpus_is_well_formed():
    specs = load_corpus()
    names = [s.name for s in specs]
    assert len(set(names)) == len(names)
    assert any(hypercontractive(s) for s in specs)
    for s in specs:
        assert s.profile().q == s.polynomial.power


def test_random_instance_deterministic():
    a = random_instance(random.Random(5))
    b = random_instance(random.Random(5))
    assert a[0] == b[0] and [d.to_dict() for d in a[1]] == [d.to_dict() for d in b[1]]


def test_refit_reproduces_committed_manifest():
    from polybound.corpus import fit_manifest

    committed = json.loads((shipped_corpus_dir().parent / "constants.json").read_text())
    committed.pop("fit_date")
    assert fit_manifest() == committed
