#include "ogw/keys.hpp"

namespace ogw {

std::string OrderTuple::str() const {
    std::string s = "(" + rational_str(energy) + "," + std::to_string(k) + "," +
                    std::to_string(ell) + ",[";
    for (int i = 0; i < ell; ++i) {
        if (i)
            s += ",";
        s += std::to_string(degs[i]);
    }
    s += "])";
    return s;
}

} // namespace ogw
