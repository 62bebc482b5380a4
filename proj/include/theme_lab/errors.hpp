#pragma once

#include <stdexcept>
#include <string>

namespace theme_lab {

/* Base of every error raised by the library. */
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define THEME_LAB_ERROR(Name)                                              \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}       \
    };

THEME_LAB_ERROR(NonUnit)
THEME_LAB_ERROR(InsufficientPrecision)
THEME_LAB_ERROR(NonUnitInverse)
THEME_LAB_ERROR(UnknownBlock)
THEME_LAB_ERROR(NotIntegrable)
THEME_LAB_ERROR(DegreeOverflow)
THEME_LAB_ERROR(InvalidInvariants)
THEME_LAB_ERROR(Mismatch)
THEME_LAB_ERROR(ShiftTooSmall)
THEME_LAB_ERROR(PrecisionUncertified)
THEME_LAB_ERROR(MethodDisagreement)
THEME_LAB_ERROR(EulerViolation)
THEME_LAB_ERROR(InputError)

#undef THEME_LAB_ERROR

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t pos)
        : Error("SyntaxError", msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

class NotATheme : public Error {
public:
    explicit NotATheme(int index)
        : Error("NotATheme", "coefficient of b^{p_" + std::to_string(index) + "} in S_" +
                                 std::to_string(index) + " vanishes"),
          index_(index) {}
    int index() const { return index_; }

private:
    int index_;
};

class ConstraintViolation : public Error {
public:
    explicit ConstraintViolation(const std::string& slot)
        : Error("ConstraintViolation", "slot " + slot + " must be nonzero"), slot_(slot) {}
    const std::string& slot() const { return slot_; }

private:
    std::string slot_;
};

}  // namespace theme_lab
