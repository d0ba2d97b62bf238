#include "chab/localexp.hpp"

namespace chab {

std::string UniformizerSpec::str() const {
    if (kind == UniKind::XShift) return "x - x0";
    std::string s = "(" + c.str() + ")";
    if (a == 2 && b == 1) return s + "*x^2/y";
    if (a == 0 && b == -1) return s + "*y";
    return s + "*x^" + std::to_string(a) + "/y^" + std::to_string(b);
}

}  // namespace chab
