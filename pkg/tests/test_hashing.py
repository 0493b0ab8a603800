from motives.shared.hashing import sha256_bytes, sha256_canonical


def test_sha256_bytes_known_value() -> None:
    assert sha256_bytes(b"") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


def test_canonical_hash_ignores_key_order() -> None:
    left = {"name": "m", "r": 1, "d": 1, "u": [["2"]]}
    right = {"u": [["2"]], "d": 1, "r": 1, "name": "m"}
    assert sha256_canonical(left) == sha256_canonical(right)
    assert sha256_canonical(left) != sha256_canonical({**left, "u": [["3"]]})
