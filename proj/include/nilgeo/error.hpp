#pragma once

#include <stdexcept>
#include <string>

namespace nilgeo {

/// Base of every error raised by the library. `kind()` is a stable tag used in reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define NILGEO_DEFINE_ERROR(Name)                                                   \
  class Name : public Error {                                                       \
   public:                                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}                  \
  }

NILGEO_DEFINE_ERROR(DimensionMismatch);
NILGEO_DEFINE_ERROR(UnsupportedOrder);
NILGEO_DEFINE_ERROR(IncompatibleSplit);
NILGEO_DEFINE_ERROR(NotAutomorphism);
NILGEO_DEFINE_ERROR(SingularMatrix);
NILGEO_DEFINE_ERROR(NotClosed);
NILGEO_DEFINE_ERROR(BadCartan);
NILGEO_DEFINE_ERROR(NonSemisimpleResidue);
NILGEO_DEFINE_ERROR(SigmaNotSimple);
NILGEO_DEFINE_ERROR(NotInLevi);
NILGEO_DEFINE_ERROR(NotSubalgebra);
NILGEO_DEFINE_ERROR(AmbiguousTrend);
NILGEO_DEFINE_ERROR(RankNotOne);
NILGEO_DEFINE_ERROR(NotExpanding);
NILGEO_DEFINE_ERROR(TranslationNotInF);
NILGEO_DEFINE_ERROR(TranslationNotInI);
NILGEO_DEFINE_ERROR(NotInvariant);
NILGEO_DEFINE_ERROR(NotGraded);
NILGEO_DEFINE_ERROR(ZeroNormal);
NILGEO_DEFINE_ERROR(NotFiltered);
NILGEO_DEFINE_ERROR(FactorizationFailed);
NILGEO_DEFINE_ERROR(UnknownKey);
NILGEO_DEFINE_ERROR(ParseError);

#undef NILGEO_DEFINE_ERROR

}  // namespace nilgeo
