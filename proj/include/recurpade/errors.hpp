#ifndef RECURPADE_ERRORS_HPP
#define RECURPADE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace recurpade {

// Failure kinds surfaced by the numerical pipeline.  Input/usage problems
// throw std::invalid_argument instead; ComputeError means the data or the
// numerics refused, not the caller.
enum class Errc {
  DenominatorVanishesAtOrigin,
  DidNotConverge,
  LimitUnknown,
  InsufficientData,
  AllZeroTail,
  NoMatchingCircle,
  ZeroGamma,
  ZeroLambda,
  NotASolution,
  ModulusCollision,
  InsufficientTail,
  AmbiguousGrouping,
  PoorFit,
  RankDeficient,
  ZeroPilotCoefficient,
  CircleHypothesisViolated,
  NonTermination,
  TruncationTooShort,
  WindowTooShort,
  DegenerateDenominators,
  HypothesisViolated,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DenominatorVanishesAtOrigin: return "DenominatorVanishesAtOrigin";
    case Errc::DidNotConverge: return "DidNotConverge";
    case Errc::LimitUnknown: return "LimitUnknown";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::AllZeroTail: return "AllZeroTail";
    case Errc::NoMatchingCircle: return "NoMatchingCircle";
    case Errc::ZeroGamma: return "ZeroGamma";
    case Errc::ZeroLambda: return "ZeroLambda";
    case Errc::NotASolution: return "NotASolution";
    case Errc::ModulusCollision: return "ModulusCollision";
    case Errc::InsufficientTail: return "InsufficientTail";
    case Errc::AmbiguousGrouping: return "AmbiguousGrouping";
    case Errc::PoorFit: return "PoorFit";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::ZeroPilotCoefficient: return "ZeroPilotCoefficient";
    case Errc::CircleHypothesisViolated: return "CircleHypothesisViolated";
    case Errc::NonTermination: return "NonTermination";
    case Errc::TruncationTooShort: return "TruncationTooShort";
    case Errc::WindowTooShort: return "WindowTooShort";
    case Errc::DegenerateDenominators: return "DegenerateDenominators";
    case Errc::HypothesisViolated: return "HypothesisViolated";
  }
  return "Unknown";
}

class ComputeError : public std::runtime_error {
 public:
  ComputeError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace recurpade

#endif
