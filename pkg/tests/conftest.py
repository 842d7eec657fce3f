import random

import pytest
from fastapi.testclient import TestClient

from app.syntax.parser import parse_term
from main import app

READER = "a |> b.0"
RECURSIVE_READER = "rec x. (a.x + b.0)"
PRIORITY = "a |> (rec x. b.x |[b]| b |> c.0)"

SMALL_BOUND = 200


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def client():
    return TestClient(app)


@pytest.fixture
def reader():
    return parse_term(READER)


@pytest.fixture
def recursive_reader():
    return parse_term(RECURSIVE_READER)


@pytest.fixture
def net_text():
    return "\n".join(
        [
            "# p has two producers, two consumers and two readers; q is its complement",
            "place p",
            "place q marked",
            "trans t1",
            "trans t2",
            "trans t3",
            "trans t4",
            "trans t5",
            "trans t6",
            "arc q -> t1",
            "arc q -> t2",
            "arc t1 -> p",
            "arc t2 -> p",
            "arc p -> t3",
            "arc p -> t4",
            "arc t3 -> q",
            "arc t4 -> q",
            "read p -- t5",
            "read p -- t6",
        ]
    )
