#pragma once

#include <stdexcept>
#include <string>

namespace itermean {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ITERMEAN_DEFINE_ERROR(Name)       \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

ITERMEAN_DEFINE_ERROR(DomainError);
ITERMEAN_DEFINE_ERROR(RootMismatch);
ITERMEAN_DEFINE_ERROR(NoSignChange);
ITERMEAN_DEFINE_ERROR(BracketFailure);
ITERMEAN_DEFINE_ERROR(DomainMismatch);
ITERMEAN_DEFINE_ERROR(NotSurjective);
ITERMEAN_DEFINE_ERROR(NotInvertible);
ITERMEAN_DEFINE_ERROR(NotAnInvolution);
ITERMEAN_DEFINE_ERROR(BadAnchor);
ITERMEAN_DEFINE_ERROR(TooShort);
ITERMEAN_DEFINE_ERROR(SingularSystem);
ITERMEAN_DEFINE_ERROR(MixedRegime);
ITERMEAN_DEFINE_ERROR(ParseError);

#undef ITERMEAN_DEFINE_ERROR

/// Iterative solver gave up; carries the best residual it reached.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace itermean
