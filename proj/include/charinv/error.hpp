#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace charinv {

/// Error conditions raised by validators and enumerators.
enum class Errc {
  InvalidArgument,
  ShapeMismatch,
  NotLatinSquare,
  NoIdentity,
  NotAssociative,
  NotSubgroup,
  NotNormal,
  NotHomomorphism,
  NotAutomorphism,
  ActionNotHomomorphic,
  ModulusOverflow,
  NotBimultiplicative,
  NotCyclic,
  NotGenerator,
  NotNormalized,
  CocycleIdentityFails,
  NotSymmetric,
  WitnessNotFound,
  RelationFails,
  NonEquivariant,
  NotAnExtension,
  NotExtendable,
  NotCoprime,
  NotActInvariant,
  ContextMismatch,
  EnumerationCapExceeded,
  ParseError,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotLatinSquare: return "NotLatinSquare";
    case Errc::NoIdentity: return "NoIdentity";
    case Errc::NotAssociative: return "NotAssociative";
    case Errc::NotSubgroup: return "NotSubgroup";
    case Errc::NotNormal: return "NotNormal";
    case Errc::NotHomomorphism: return "NotHomomorphism";
    case Errc::NotAutomorphism: return "NotAutomorphism";
    case Errc::ActionNotHomomorphic: return "ActionNotHomomorphic";
    case Errc::ModulusOverflow: return "ModulusOverflow";
    case Errc::NotBimultiplicative: return "NotBimultiplicative";
    case Errc::NotCyclic: return "NotCyclic";
    case Errc::NotGenerator: return "NotGenerator";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::CocycleIdentityFails: return "CocycleIdentityFails";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::WitnessNotFound: return "WitnessNotFound";
    case Errc::RelationFails: return "RelationFails";
    case Errc::NonEquivariant: return "NonEquivariant";
    case Errc::NotAnExtension: return "NotAnExtension";
    case Errc::NotExtendable: return "NotExtendable";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::NotActInvariant: return "NotActInvariant";
    case Errc::ContextMismatch: return "ContextMismatch";
    case Errc::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Exception carrying an error code and, where one exists, the offending
/// cell or tuple of element ids.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::vector<std::int64_t> witness = {})
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        witness_(std::move(witness)) {}

  Errc code() const noexcept { return code_; }
  const std::vector<std::int64_t>& witness() const noexcept { return witness_; }

 private:
  Errc code_;
  std::vector<std::int64_t> witness_;
};

/// Search-space limits shared by every brute-force routine.
struct EnumOptions {
  std::uint64_t max_enum = 1'000'000;  // candidates visited
  std::size_t max_order = 24;          // group order for isomorphism/hom search
  unsigned jobs = 1;
};

}  // namespace charinv
