#include "ogw/verifier.hpp"
#include <chrono>
#include <iostream>

using namespace ogw;

static void timed_closed(const char* name, Model m, Rational E, int tcap) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    ClosedEngine closed(m);
    ValueSource src(m, closed, nullptr, false);
    SweepBounds sb;
    sb.max_energy = E;
    sb.max_t = tcap;
    uint64_t checked = 0;
    auto bad = sweep_closed(m, src, sb, &checked);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
    std::cout << name << ": " << checked << " residuals, " << bad.size() << " violations ("
              << ms << " ms)\n";
}

int main() {
    timed_closed("cp2 E<=4 t<=6", preset_projective(2), Rational(4), 6);
    timed_closed("cp1xcp1 E<=8 t<=4", preset_product(1, 1), Rational(8), 4);
    return 0;
}
