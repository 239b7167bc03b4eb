#include "poisonguard/secp256k1.hpp"

#include <cstring>

namespace poisonguard::secp {

namespace {

using u128 = unsigned __int128;

// p = 2^256 - 2^32 - 977
constexpr std::array<uint64_t, 4> kPrime = {0xfffffffefffffc2fULL, 0xffffffffffffffffULL,
                                            0xffffffffffffffffULL, 0xffffffffffffffffULL};
// 2^256 mod p
constexpr uint64_t kFold = 0x1000003d1ULL;

// n = group order
constexpr std::array<uint64_t, 4> kOrder = {0xbfd25e8cd0364141ULL, 0xbaaedce6af48a03bULL,
                                            0xfffffffffffffffeULL, 0xffffffffffffffffULL};

constexpr std::array<uint64_t, 4> kGenX = {0x59f2815b16f81798ULL, 0x029bfcdb2dce28d9ULL,
                                           0x55a06295ce870b07ULL, 0x79be667ef9dcbbacULL};
constexpr std::array<uint64_t, 4> kGenY = {0x9c47d08ffb10d4b8ULL, 0xfd17b448a6855419ULL,
                                           0x5da4fbfc0e1108a8ULL, 0x483ada7726a3c465ULL};

inline bool geq(const std::array<uint64_t, 4>& a, const std::array<uint64_t, 4>& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return true;
}

inline void sub_in_place(std::array<uint64_t, 4>& a, const std::array<uint64_t, 4>& b) {
    uint64_t borrow = 0;
    for (int i = 0; i < 4; ++i) {
        const uint64_t bi = b[i] + borrow;
        const uint64_t next_borrow = (bi < b[i]) || (a[i] < bi);
        a[i] -= bi;
        borrow = next_borrow;
    }
}

inline void reduce_once(FieldElement& fe) {
    if (geq(fe.limbs, kPrime)) sub_in_place(fe.limbs, kPrime);
}

// Reduces an 8-limb product using 2^256 = kFold (mod p).
FieldElement reduce512(const uint64_t c[8]) {
    uint64_t r[4];
    u128 acc = 0;
    for (int i = 0; i < 4; ++i) {
        acc += c[i];
        acc += static_cast<u128>(c[i + 4]) * kFold;
        r[i] = static_cast<uint64_t>(acc);
        acc >>= 64;
    }
    // acc <= ~2^34; fold it back in until it vanishes.
    while (acc) {
        u128 carry = static_cast<u128>(static_cast<uint64_t>(acc)) * kFold;
        acc >>= 64;  // zero by magnitude, kept for clarity
        for (int i = 0; i < 4 && carry; ++i) {
            carry += r[i];
            r[i] = static_cast<uint64_t>(carry);
            carry >>= 64;
        }
        acc += carry;
    }
    FieldElement out{{r[0], r[1], r[2], r[3]}};
    reduce_once(out);
    return out;
}

}  // namespace

FieldElement fe_add(const FieldElement& a, const FieldElement& b) {
    FieldElement out;
    u128 acc = 0;
    for (int i = 0; i < 4; ++i) {
        acc += a.limbs[i];
        acc += b.limbs[i];
        out.limbs[i] = static_cast<uint64_t>(acc);
        acc >>= 64;
    }
    if (acc) {
        // Wrapped past 2^256: add the fold constant.
        u128 carry = kFold;
        for (int i = 0; i < 4 && carry; ++i) {
            carry += out.limbs[i];
            out.limbs[i] = static_cast<uint64_t>(carry);
            carry >>= 64;
        }
    }
    reduce_once(out);
    return out;
}

FieldElement fe_sub(const FieldElement& a, const FieldElement& b) {
    FieldElement negated;
    negated.limbs = kPrime;
    if (!(b.limbs == std::array<uint64_t, 4>{})) {
        sub_in_place(negated.limbs, b.limbs);
    } else {
        negated.limbs = {};
    }
    return fe_add(a, negated);
}

FieldElement fe_mul(const FieldElement& a, const FieldElement& b) {
    uint64_t c[8] = {};
    for (int i = 0; i < 4; ++i) {
        u128 carry = 0;
        for (int j = 0; j < 4; ++j) {
            carry += static_cast<u128>(a.limbs[i]) * b.limbs[j];
            carry += c[i + j];
            c[i + j] = static_cast<uint64_t>(carry);
            carry >>= 64;
        }
        c[i + 4] = static_cast<uint64_t>(carry);
    }
    return reduce512(c);
}

FieldElement fe_sqr(const FieldElement& a) { return fe_mul(a, a); }

FieldElement fe_inv(const FieldElement& a) {
    // Fermat: a^(p-2). Inversions are rare (affine conversions only).
    FieldElement result{{1, 0, 0, 0}};
    FieldElement base = a;
    std::array<uint64_t, 4> exponent = kPrime;
    exponent[0] -= 2;
    for (int limb = 0; limb < 4; ++limb) {
        uint64_t bits = exponent[limb];
        for (int i = 0; i < 64; ++i) {
            if (bits & 1) result = fe_mul(result, base);
            base = fe_sqr(base);
            bits >>= 1;
        }
    }
    return result;
}

FieldElement fe_from_bytes(const Bytes32& be) {
    FieldElement fe;
    for (int i = 0; i < 4; ++i) {
        uint64_t limb = 0;
        for (int b = 0; b < 8; ++b) limb = (limb << 8) | be[8 * (3 - i) + b];
        fe.limbs[i] = limb;
    }
    reduce_once(fe);
    return fe;
}

Bytes32 fe_to_bytes(const FieldElement& fe) {
    Bytes32 out;
    for (int i = 0; i < 4; ++i) {
        const uint64_t limb = fe.limbs[3 - i];
        for (int b = 0; b < 8; ++b) {
            out[8 * i + b] = static_cast<uint8_t>(limb >> (8 * (7 - b)));
        }
    }
    return out;
}

AffinePoint generator() {
    return AffinePoint{FieldElement{kGenX}, FieldElement{kGenY}, false};
}

Bytes32 group_order_bytes() {
    Bytes32 out;
    for (int i = 0; i < 4; ++i) {
        const uint64_t limb = kOrder[3 - i];
        for (int b = 0; b < 8; ++b) {
            out[8 * i + b] = static_cast<uint8_t>(limb >> (8 * (7 - b)));
        }
    }
    return out;
}

bool on_curve(const AffinePoint& point) {
    if (point.infinity) return false;
    const FieldElement y2 = fe_sqr(point.y);
    const FieldElement x3 = fe_mul(fe_sqr(point.x), point.x);
    return y2 == fe_add(x3, FieldElement{{7, 0, 0, 0}});
}

bool scalar_is_valid(const Bytes32& scalar_be) {
    std::array<uint64_t, 4> value;
    for (int i = 0; i < 4; ++i) {
        uint64_t limb = 0;
        for (int b = 0; b < 8; ++b) limb = (limb << 8) | scalar_be[8 * (3 - i) + b];
        value[i] = limb;
    }
    if (value == std::array<uint64_t, 4>{}) return false;
    return !geq(value, kOrder);
}

namespace {

struct JacobianPoint {
    FieldElement x, y, z;
    bool infinity = true;
};

JacobianPoint to_jacobian(const AffinePoint& p) {
    if (p.infinity) return {};
    return {p.x, p.y, FieldElement{{1, 0, 0, 0}}, false};
}

AffinePoint to_affine(const JacobianPoint& p) {
    if (p.infinity) return {FieldElement{}, FieldElement{}, true};
    const FieldElement zinv = fe_inv(p.z);
    const FieldElement zinv2 = fe_sqr(zinv);
    return {fe_mul(p.x, zinv2), fe_mul(p.y, fe_mul(zinv2, zinv)), false};
}

JacobianPoint dbl(const JacobianPoint& p) {
    if (p.infinity) return p;
    // a = 0 doubling; secp256k1 has no 2-torsion, so y != 0.
    const FieldElement a = fe_sqr(p.x);
    const FieldElement b = fe_sqr(p.y);
    const FieldElement c = fe_sqr(b);
    FieldElement d = fe_sub(fe_sqr(fe_add(p.x, b)), fe_add(a, c));
    d = fe_add(d, d);
    const FieldElement e = fe_add(fe_add(a, a), a);
    const FieldElement f = fe_sqr(e);

    JacobianPoint out;
    out.infinity = false;
    out.x = fe_sub(f, fe_add(d, d));
    FieldElement c8 = fe_add(c, c);
    c8 = fe_add(c8, c8);
    c8 = fe_add(c8, c8);
    out.y = fe_sub(fe_mul(e, fe_sub(d, out.x)), c8);
    const FieldElement yz = fe_mul(p.y, p.z);
    out.z = fe_add(yz, yz);
    return out;
}

// Mixed addition with an affine second operand.
JacobianPoint madd(const JacobianPoint& p, const AffinePoint& q) {
    if (q.infinity) return p;
    if (p.infinity) return to_jacobian(q);

    const FieldElement z1z1 = fe_sqr(p.z);
    const FieldElement u2 = fe_mul(q.x, z1z1);
    const FieldElement s2 = fe_mul(q.y, fe_mul(p.z, z1z1));
    const FieldElement h = fe_sub(u2, p.x);
    const FieldElement r_half = fe_sub(s2, p.y);

    if (h == FieldElement{}) {
        if (r_half == FieldElement{}) return dbl(p);
        return {};  // P + (-P)
    }

    const FieldElement hh = fe_sqr(h);
    FieldElement i = fe_add(hh, hh);
    i = fe_add(i, i);
    const FieldElement j = fe_mul(h, i);
    const FieldElement r = fe_add(r_half, r_half);
    const FieldElement v = fe_mul(p.x, i);

    JacobianPoint out;
    out.infinity = false;
    out.x = fe_sub(fe_sub(fe_sqr(r), j), fe_add(v, v));
    FieldElement y1j = fe_mul(p.y, j);
    y1j = fe_add(y1j, y1j);
    out.y = fe_sub(fe_mul(r, fe_sub(v, out.x)), y1j);
    out.z = fe_sub(fe_sub(fe_sqr(fe_add(p.z, h)), z1z1), hh);
    return out;
}

// Fixed-base comb: kCombTable[w][d-1] = d * 16^w * G for d in 1..15.
struct CombTable {
    AffinePoint entries[64][15];
};

const CombTable& comb_table() {
    static const CombTable table = [] {
        CombTable t;
        AffinePoint base = generator();
        for (int window = 0; window < 64; ++window) {
            JacobianPoint acc{};
            for (int digit = 1; digit <= 15; ++digit) {
                acc = madd(acc, base);
                t.entries[window][digit - 1] = to_affine(acc);
            }
            JacobianPoint next = to_jacobian(base);
            for (int i = 0; i < 4; ++i) next = dbl(next);
            base = to_affine(next);
        }
        return t;
    }();
    return table;
}

}  // namespace

AffinePoint mul_base(const Bytes32& scalar_be) {
    const CombTable& table = comb_table();
    JacobianPoint acc{};
    for (int window = 0; window < 64; ++window) {
        const uint8_t byte = scalar_be[31 - window / 2];
        const int digit = (window % 2 == 0) ? (byte & 0x0f) : (byte >> 4);
        if (digit) acc = madd(acc, table.entries[window][digit - 1]);
    }
    return to_affine(acc);
}

AffinePoint mul_point(const AffinePoint& point, const Bytes32& scalar_be) {
    JacobianPoint acc{};
    for (const uint8_t byte : scalar_be) {
        for (int bit = 7; bit >= 0; --bit) {
            acc = dbl(acc);
            if ((byte >> bit) & 1) acc = madd(acc, point);
        }
    }
    return to_affine(acc);
}

std::array<uint8_t, 64> serialize_uncompressed(const AffinePoint& point) {
    std::array<uint8_t, 64> out;
    const Bytes32 x = fe_to_bytes(point.x);
    const Bytes32 y = fe_to_bytes(point.y);
    std::memcpy(out.data(), x.data(), 32);
    std::memcpy(out.data() + 32, y.data(), 32);
    return out;
}

}  // namespace poisonguard::secp
