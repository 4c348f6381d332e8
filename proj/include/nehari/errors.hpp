#ifndef NEHARI_ERRORS_HPP
#define NEHARI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nehari {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NEHARI_DECLARE_ERROR(Name)                                            \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}  \
    }

NEHARI_DECLARE_ERROR(NonPositiveInput);
NEHARI_DECLARE_ERROR(IndexViolation);
NEHARI_DECLARE_ERROR(BracketFailure);
NEHARI_DECLARE_ERROR(CriticalExponentUndefined);
NEHARI_DECLARE_ERROR(DiagonalPair);
NEHARI_DECLARE_ERROR(ZeroDenominator);
NEHARI_DECLARE_ERROR(NotOnNehari);
NEHARI_DECLARE_ERROR(NoAdmissibleSeed);
NEHARI_DECLARE_ERROR(InvalidRegime);
NEHARI_DECLARE_ERROR(ContinuationStall);
NEHARI_DECLARE_ERROR(ConfigParseError);

#undef NEHARI_DECLARE_ERROR

}

#endif
