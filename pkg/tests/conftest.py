import pytest

from sgplab.smallsemi import get_corpus


@pytest.fixture(scope="session")
def corpus_upto_3():
    return [S for n in (1, 2, 3) for S in get_corpus(n).entries]


@pytest.fixture(scope="session")
def corpus_upto_4():
    return [S for n in (1, 2, 3, 4) for S in get_corpus(n).entries]
