// Smallest end-to-end use of the library: the Nash inequality with its sharp
// constant on a space whose volume ratio falls from 1 to 0.4.
#include <cstdio>

#include "conesob/blowdown.hpp"

int main()
{
    using namespace conesob;
    const RadialSpace space = interpolated_space(3.0, 0.4, 1.0);
    const InequalitySpec nash = make_spec(Family::nash, {.N = 3.0});
    const double c = cd_constant(nash, space.avr);
    const BlowdownReport r = end_to_end_blowdown(space, nash, extremizer(nash), c);
    std::printf("%s: c=%.6g avr_bound=%.6g attained=%.6g verdict=%s\n", space.label.c_str(), c, r.avr_bound,
                r.attained_avr, r.verdict.c_str());
    return r.verdict == "violated" ? 1 : 0;
}
