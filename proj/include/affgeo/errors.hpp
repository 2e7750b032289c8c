#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace affgeo {

enum class ErrorKind {
  PointOutOfDomain,
  MetricNotSPD,
  OrderUnsupported,
  InvalidN,
  NonConstantFAtNEqualsN,
  DegenerateJacobian,
  QuadratureUnderResolved,
  UnsupportedKind,
  DegenerateCell,
  SolverNoConvergence,
  NotDMinimal,
  NonpositiveK,
  MeshNotTwoDim,
  SingularSystem,
  ConfigInvalid,
  CheckNotRefinable,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::PointOutOfDomain: return "PointOutOfDomain";
    case ErrorKind::MetricNotSPD: return "MetricNotSPD";
    case ErrorKind::OrderUnsupported: return "OrderUnsupported";
    case ErrorKind::InvalidN: return "InvalidN";
    case ErrorKind::NonConstantFAtNEqualsN: return "NonConstantFAtNEqualsN";
    case ErrorKind::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorKind::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorKind::UnsupportedKind: return "UnsupportedKind";
    case ErrorKind::DegenerateCell: return "DegenerateCell";
    case ErrorKind::SolverNoConvergence: return "SolverNoConvergence";
    case ErrorKind::NotDMinimal: return "NotDMinimal";
    case ErrorKind::NonpositiveK: return "NonpositiveK";
    case ErrorKind::MeshNotTwoDim: return "MeshNotTwoDim";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::CheckNotRefinable: return "CheckNotRefinable";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace affgeo
