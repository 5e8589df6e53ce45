#include "snnrx/rng.hpp"

#include <sstream>

namespace snnrx {

std::string RandomStream::state_string() const {
    std::ostringstream os;
    os << eng_;
    return os.str();
}

void RandomStream::restore_state(const std::string& s) {
    std::istringstream is(s);
    is >> eng_;
}

}  // namespace snnrx
