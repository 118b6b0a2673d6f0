#include "prony/error.hpp"

namespace prony {

NumericalError::NumericalError(std::string stage, const std::string& message)
    : Error(stage + ": " + message), stage_(std::move(stage)) {}

}  // namespace prony
