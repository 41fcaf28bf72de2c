#pragma once

#include <stdexcept>
#include <string>

namespace bgl {

// Invalid input or out-of-domain request.
class Rejected : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A factor of a product vanished (or came within the guard distance).
class SingularPoint : public Rejected {
public:
    using Rejected::Rejected;
};

}  // namespace bgl
