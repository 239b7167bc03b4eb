#pragma once

#include <stdexcept>
#include <string>

namespace poisonguard {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hex text is not a well-formed address (wrong length, non-hex characters).
struct MalformedHex : Error {
    using Error::Error;
};

// Mixed-case address text fails checksum validation (strict parsing only).
struct BadChecksum : Error {
    using Error::Error;
};

// Requested prefix + suffix exceeds the 40 hex characters of an address.
struct LengthOverflow : Error {
    using Error::Error;
};

// Decimal amount has more fractional digits than the asset allows.
struct PrecisionLoss : Error {
    using Error::Error;
};

// Text is not a non-negative decimal numeral.
struct MalformedNumber : Error {
    using Error::Error;
};

// Input document violates the fixture/snapshot schema. `location` is a
// JSON-pointer-style path to the offending element.
struct SchemaError : Error {
    std::string location;
    SchemaError(std::string loc, const std::string& what)
        : Error(loc + ": " + what), location(std::move(loc)) {}
};

// Two records share the same (tx hash, log index) identity.
struct DuplicateRecord : Error {
    using Error::Error;
};

// Event log's first topic is not the ERC-20 Transfer signature.
struct NotTransferEvent : Error {
    using Error::Error;
};

// Event log has the Transfer topic but a malformed body.
struct MalformedLog : Error {
    using Error::Error;
};

// Verdict list does not line up with the history it claims to describe.
struct MismatchedVerdicts : Error {
    using Error::Error;
};

// Scenario construction requires a look-alike benign/phishing pair.
struct NotLookalike : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Vanity search ran out of budget before finding a match.
struct SearchExhausted : Error {
    using Error::Error;
};

}  // namespace poisonguard
