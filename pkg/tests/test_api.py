import pytest
from httpx import ASGITransport, AsyncClient

from main import app
from tests.conftest import READER, RECURSIVE_READER

TERMS = "/api/v1/terms"
ANALYSIS = "/api/v1/analysis"
PETRI = "/api/v1/petri"


def test_root_and_health(client):
    assert client.get("/").json()["status"] == "running"
    health = client.get("/health").json()
    assert health["status"] == "healthy"
    assert health["max_states"] > 0


def test_parse(client):
    response = client.post(f"{TERMS}/parse", data={"term": READER})
    assert response.status_code == 200
    body = response.json()
    assert body["schema"] == 1
    assert body["language"] == "r"
    assert body["sort"] == ["a", "b"]


def test_parse_error_is_a_bad_request(client):
    response = client.post(f"{TERMS}/parse", data={"term": "a.0 +\n )"})
    assert response.status_code == 400
    detail = response.json()["detail"]
    assert detail["kind"] == "syntax_error"
    assert detail["line"] == 2


def test_language_is_validated(client):
    response = client.post(f"{TERMS}/parse", data={"term": READER, "language": "x"})
    assert response.status_code == 422


def test_steps(client):
    body = client.post(f"{TERMS}/steps", data={"term": READER}).json()
    assert [(step["text"], step["target"]) for step in body["steps"]] == [("a?", READER), ("b", "0")]


def test_time(client):
    maximal = client.post(f"{TERMS}/time", data={"term": READER}).json()
    assert maximal["full"] and maximal["target"] == "!a |> !b.0"
    given = client.post(f"{TERMS}/time", data={"term": "!a |> !b.0", "refusal": "{a}"}).json()
    assert given["possible"] is False


def test_malformed_refusal(client):
    response = client.post(f"{TERMS}/time", data={"term": READER, "refusal": "a,b"})
    assert response.status_code == 400
    assert response.json()["detail"]["kind"] == "syntax_error"


def test_proper(client):
    body = client.post(f"{TERMS}/proper", data={"term": "{a} |> {b} |> c.0"}).json()
    assert body["verdict"] == "no"
    assert body["violation"]["path"] == ""


def test_rnf_and_translate(client):
    assert client.post(f"{TERMS}/rnf", data={"term": "a |> b.0 + c.0"}).json()["verdict"] == "no"
    body = client.post(f"{TERMS}/translate", data={"term": "a |> b |> c.0", "direction": "r2s"}).json()
    assert body["term"] == "{a,b} |> c.0"
    assert body["language"] == "s"


def test_normalize(client):
    body = client.post(f"{TERMS}/normalize", data={"term": "a |> (b.0 |[]| c.0)"}).json()
    assert body["term"] == "(e1 |> b.0 |[e1]| e1 |> c.0)[e1->a]"


def test_apply_law(client):
    body = client.post(f"{TERMS}/laws/apply", data={"term": "a |> b |> c.0", "law": "L1"}).json()
    assert body["term"] == "b |> a |> c.0"
    response = client.post(f"{TERMS}/laws/apply", data={"term": "c.0", "law": "L1"})
    assert response.json()["detail"]["kind"] == "no_match"


def test_explore(client):
    body = client.post(f"{ANALYSIS}/explore", data={"term": READER}).json()
    assert body["states"] == 3
    assert body["truncated"] is False
    bounded = client.post(
        f"{ANALYSIS}/explore", data={"term": "rec x. a.(x |[]| b.0)", "max_states": 5}
    ).json()
    assert bounded["truncated"] is True


def test_bisim(client):
    body = client.post(f"{ANALYSIS}/bisim", data={"left": "a.0 |[]| b.0", "right": "a.b.0 + b.a.0"}).json()
    assert body["verdict"] == "distinguished"
    assert body["witness"]["refusal"] == "{b}"


def test_bisim_scheme_must_fit_the_terms(client):
    response = client.post(f"{ANALYSIS}/bisim", data={"left": "{a} |> b.0", "right": "a |> b.0"})
    assert response.status_code == 400
    assert response.json()["detail"]["kind"] == "wrong_language"


def test_fairness(client):
    words = client.post(f"{ANALYSIS}/fair/words", data={"term": READER, "max_len": 3}).json()
    assert words["words"] == ["b", "ab", "aab"]
    member = client.post(f"{ANALYSIS}/fair/member", data={"term": READER, "word": "aa"}).json()
    assert member["verdict"] == "no"
    lasso = client.post(f"{ANALYSIS}/fair/lasso", data={"term": RECURSIVE_READER}).json()
    assert (lasso["verdict"], lasso["prefix"], lasso["loop"]) == ("yes", "", "a")


def test_traces(client):
    body = client.post(f"{ANALYSIS}/traces", data={"term": READER, "trace": "1a1a"}).json()
    assert body["verdict"] == "no"
    listed = client.post(f"{ANALYSIS}/traces", data={"term": "0", "max_len": 2}).json()
    assert listed["traces"] == ["", "1", "11"]
    compared = client.post(
        f"{ANALYSIS}/traces/compare", data={"left": READER, "right": RECURSIVE_READER, "max_len": 4}
    ).json()
    assert compared["verdict"] == "distinguished"


def test_import_net(client, net_text):
    response = client.post(f"{PETRI}/import", files={"net": ("place.net", net_text, "text/plain")})
    assert response.status_code == 200
    body = response.json()
    assert body["proper"] is True
    assert body["markings"] == 2
    assert body["places"] == ["p", "q"]


def test_net_correspondence(client, net_text):
    response = client.post(f"{PETRI}/correspondence", files={"net": ("place.net", net_text, "text/plain")})
    assert response.json()["verdict"] == "equivalent"


def test_unsafe_net(client):
    unsafe = "place p marked\ntrans t\narc t -> p"
    response = client.post(f"{PETRI}/import", files={"net": ("bad.net", unsafe, "text/plain")})
    assert response.status_code == 400
    assert response.json()["detail"]["kind"] == "not_safe"


def test_binary_net_is_rejected(client):
    response = client.post(f"{PETRI}/import", files={"net": ("bad.net", b"\xff\xfe\x00", "application/octet-stream")})
    assert response.status_code == 400
    assert response.json()["detail"]["kind"] == "net_format"


def test_reference_validation(client):
    body = client.post("/api/v1/reference/validate").json()
    assert body["verdict"] == "yes", [check for check in body["checks"] if not check["passed"]]


@pytest.mark.asyncio
async def test_async_client_bisim():
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as client:
        response = await client.post(
            f"{ANALYSIS}/bisim",
            data={"left": "{a,b} |> c.0", "right": "a |> b |> c.0", "scheme": "s"},
        )
    assert response.status_code == 200
    assert response.json()["verdict"] == "equivalent"
