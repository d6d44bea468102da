#include "doctest.h"

#include <string>

#include "qec/pauli.hpp"
#include "qec/rng.hpp"

using namespace qec;

TEST_CASE("parse and format round trip") {
    for (const std::string text : {"I", "X", "Y", "Z", "IXYZ", "XXII", "ZZZZZ", "IYIYIY"}) {
        const PauliOp p = parse_pauli(text);
        CHECK(p.n == static_cast<int>(text.size()));
        CHECK(format_pauli(p) == text);
    }
}

TEST_CASE("parse rejects bad characters") {
    CHECK_THROWS(parse_pauli("IXQZ"));
    CHECK(parse_pauli("").n == 0);  // zero-qubit identity is legal
}

TEST_CASE("single qubit bit conventions") {
    CHECK(parse_pauli("X").x == 1);
    CHECK(parse_pauli("X").z == 0);
    CHECK(parse_pauli("Z").x == 0);
    CHECK(parse_pauli("Z").z == 1);
    CHECK(parse_pauli("Y").x == 1);
    CHECK(parse_pauli("Y").z == 1);
}

TEST_CASE("weight counts non identity sites") {
    CHECK(parse_pauli("IIII").weight() == 0);
    CHECK(parse_pauli("IXYZ").weight() == 3);
    CHECK(parse_pauli("YYYY").weight() == 4);
}

TEST_CASE("symplectic form matches single qubit anticommutation") {
    const PauliOp x = parse_pauli("X");
    const PauliOp y = parse_pauli("Y");
    const PauliOp z = parse_pauli("Z");
    const PauliOp i = parse_pauli("I");
    CHECK(symplectic(x, z) == 1);
    CHECK(symplectic(x, y) == 1);
    CHECK(symplectic(y, z) == 1);
    CHECK(symplectic(x, x) == 0);
    CHECK(symplectic(x, i) == 0);
    CHECK(commutes(x, x));
    CHECK_FALSE(commutes(x, z));
}

TEST_CASE("symplectic form is symmetric and bilinear over products") {
    Rng rng(7, 0);
    const int n = 9;
    for (int trial = 0; trial < 200; ++trial) {
        const PauliOp a(rng.bits() & 0x1ff, rng.bits() & 0x1ff, n);
        const PauliOp b(rng.bits() & 0x1ff, rng.bits() & 0x1ff, n);
        const PauliOp c(rng.bits() & 0x1ff, rng.bits() & 0x1ff, n);
        CHECK(symplectic(a, b) == symplectic(b, a));
        CHECK(symplectic(prod(a, b), c) == (symplectic(a, c) ^ symplectic(b, c)));
    }
}

TEST_CASE("product is phaseless XOR") {
    const PauliOp p = prod(parse_pauli("XYZI"), parse_pauli("YYII"));
    CHECK(format_pauli(p) == "ZIZI");
    Rng rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const PauliOp a(rng.bits() & 0xff, rng.bits() & 0xff, 8);
        CHECK(prod(a, a).weight() == 0);  // involution
    }
}

TEST_CASE("embed shifts support") {
    const PauliOp p = parse_pauli("XZ");
    const PauliOp e = embed(p, 6, 3);
    CHECK(format_pauli(e) == "IIIXZI");
    CHECK(symplectic(e, embed(parse_pauli("ZI"), 6, 3)) == 1);
    CHECK(symplectic(e, embed(parse_pauli("ZI"), 6, 0)) == 0);
}
