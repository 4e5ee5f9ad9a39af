#pragma once

#include <stdexcept>
#include <string>

namespace backnet {

// Every failure the library reports derives from Error; the kind() string is
// the stable machine-readable tag surfaced by the CLI.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept = 0;
};

#define BACKNET_DEFINE_ERROR(Name, Tag)                                  \
    class Name : public Error {                                          \
    public:                                                              \
        using Error::Error;                                              \
        const char* kind() const noexcept override { return Tag; }       \
    };

BACKNET_DEFINE_ERROR(ParseError, "parse-error")
BACKNET_DEFINE_ERROR(InvalidInput, "invalid-input")
BACKNET_DEFINE_ERROR(InvalidQuery, "invalid-query")
BACKNET_DEFINE_ERROR(Infeasible, "infeasible")
BACKNET_DEFINE_ERROR(InfeasibleAugmentation, "infeasible-augmentation")
BACKNET_DEFINE_ERROR(InternalConsistency, "internal-consistency")
BACKNET_DEFINE_ERROR(CombinatorialLimit, "combinatorial-limit")
BACKNET_DEFINE_ERROR(NoClique, "no-clique")
BACKNET_DEFINE_ERROR(CapExceeded, "cap-exceeded")

#undef BACKNET_DEFINE_ERROR

}  // namespace backnet
