#pragma once

#include <stdexcept>
#include <string>

namespace chab {

// Base of every error raised by the library. The kind string is stable and
// is what reports and the CLI key on.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CHAB_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

CHAB_DEFINE_ERROR(NonIntegral);
CHAB_DEFINE_ERROR(PrecisionLoss);
CHAB_DEFINE_ERROR(NotSimpleRoot);
CHAB_DEFINE_ERROR(DiscriminantNotUnit);
CHAB_DEFINE_ERROR(BadReduction);
CHAB_DEFINE_ERROR(NonGeneric);
CHAB_DEFINE_ERROR(NotUniformizer);
CHAB_DEFINE_ERROR(RamificationMismatch);
CHAB_DEFINE_ERROR(NotInGroup);
CHAB_DEFINE_ERROR(FactorizationTooHard);
CHAB_DEFINE_ERROR(CosetBlowup);
CHAB_DEFINE_ERROR(NoConjugateFactorization);
CHAB_DEFINE_ERROR(ZeroResultant);
CHAB_DEFINE_ERROR(UnsupportedField);
CHAB_DEFINE_ERROR(UncertifiedInput);
CHAB_DEFINE_ERROR(ConfigError);
CHAB_DEFINE_ERROR(DomainError);

#undef CHAB_DEFINE_ERROR

}  // namespace chab
