#ifndef PTOWER_ERRORS_HPP
#define PTOWER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ptower {

/* Caller violated a documented precondition (bad argument, wrong range). */
class precondition_error : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/* A group computation would exceed the configured element budget. */
class size_guard_error : public precondition_error
{
  public:
    using precondition_error::precondition_error;
};

/* An internal invariant failed; indicates a bug or a broken convention. */
class internal_error : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

} // namespace ptower

#endif
