#ifndef TRAILMINE_ERROR_HPP
#define TRAILMINE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace trailmine {

enum class ErrorCode {
    QOutOfRange,
    GammaOutOfRange,
    NonPositiveScale,
    InvalidArgument,
    DegenerateConditioning,
    NonPositiveInput,
    EmptyPattern,
    BackendMismatch,
    StepCapExceeded,
    EventCapExceeded,
    SingularSystem,
    InternalInconsistency,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/** Every failure raised by the library carries one of the typed codes above. */
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error{std::string{to_string(code)} + ": " + what}, m_code{code} {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

} // namespace trailmine

#endif // TRAILMINE_ERROR_HPP
