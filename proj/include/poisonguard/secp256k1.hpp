#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace poisonguard::secp {

// Minimal secp256k1 implementation, enough to derive account addresses from
// secret scalars at brute-force search rates. Not constant-time: this powers
// a simulator, not a signer.

struct FieldElement {
    // Little-endian 64-bit limbs, always fully reduced mod p.
    std::array<uint64_t, 4> limbs{};

    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

struct AffinePoint {
    FieldElement x;
    FieldElement y;
    bool infinity = false;
};

using Bytes32 = std::array<uint8_t, 32>;

// Curve constants.
AffinePoint generator();
Bytes32 group_order_bytes();

FieldElement fe_from_bytes(const Bytes32& be);
Bytes32 fe_to_bytes(const FieldElement& fe);

FieldElement fe_add(const FieldElement& a, const FieldElement& b);
FieldElement fe_sub(const FieldElement& a, const FieldElement& b);
FieldElement fe_mul(const FieldElement& a, const FieldElement& b);
FieldElement fe_sqr(const FieldElement& a);
FieldElement fe_inv(const FieldElement& a);

// y^2 == x^3 + 7
bool on_curve(const AffinePoint& point);

// True iff the 32 big-endian bytes are in [1, n-1].
bool scalar_is_valid(const Bytes32& scalar_be);

// k*G via a fixed-base comb table (built once per process). The scalar must
// be valid; returns the affine product.
AffinePoint mul_base(const Bytes32& scalar_be);

// Generic scalar multiplication (double-and-add); used for cross-checks.
AffinePoint mul_point(const AffinePoint& point, const Bytes32& scalar_be);

// 64-byte x||y big-endian encoding of a finite point.
std::array<uint8_t, 64> serialize_uncompressed(const AffinePoint& point);

}  // namespace poisonguard::secp
