#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grandlp {

// Every failure raised by the library derives from Error and carries a short
// machine-readable kind, which the CLI prints alongside the message.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept = 0;
};

#define GRANDLP_DEFINE_ERROR(Name, Base, Kind)                           \
  class Name : public Base {                                            \
   public:                                                              \
    using Base::Base;                                                   \
    std::string_view kind() const noexcept override { return Kind; }    \
  };

GRANDLP_DEFINE_ERROR(RejectedInput, Error, "rejected-input")
GRANDLP_DEFINE_ERROR(DomainError, RejectedInput, "domain-error")
GRANDLP_DEFINE_ERROR(EmptyWindow, Error, "empty-feasibility-window")
GRANDLP_DEFINE_ERROR(NonConvergence, Error, "non-convergence")
GRANDLP_DEFINE_ERROR(UnboundedObjective, Error, "unbounded-objective")
GRANDLP_DEFINE_ERROR(DivergenceError, Error, "divergence")
GRANDLP_DEFINE_ERROR(NotExact, Error, "not-exact")
GRANDLP_DEFINE_ERROR(UnsupportedInput, Error, "unsupported-input")
GRANDLP_DEFINE_ERROR(NormInfinite, Error, "norm-infinite")
GRANDLP_DEFINE_ERROR(NotInSpace, Error, "not-in-space")
GRANDLP_DEFINE_ERROR(Inapplicable, Error, "inapplicable")
GRANDLP_DEFINE_ERROR(InsufficientSpan, Error, "insufficient-span")
GRANDLP_DEFINE_ERROR(NonPositiveValues, Error, "nonpositive-values")

#undef GRANDLP_DEFINE_ERROR

}  // namespace grandlp
