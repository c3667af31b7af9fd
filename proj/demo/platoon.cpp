// Library tour on the platoon loop P C = (2s+1) / (s^2 (0.1s+1)(0.05s+1)).

#include <cmath>
#include <cstdio>

#include "netlimits/fundamental_limits.hpp"

using namespace netlimits;

int main()
{
    const RationalTF loop(Poly({1, 2}), mul(Poly({0, 0, 1, 0.1}), Poly({1, 0.05})));

    std::printf("poles:\n");
    for (const Root& p : loop.poles())
        std::printf("  %+.6f %+.6fj  (x%d)\n", p.location.real(), p.location.imag(), p.multiplicity);

    const BoundReport bound = hinf_lower_bound(loop);
    std::printf("sup_N ||S_N|| >= %.6f  (%s, a_-1 = %.6f)\n", bound.bound_value,
                std::string(to_string(bound.reason)).c_str(), bound.laurent_used->second.real());

    const StabilityReport stab = stable_for_all_gains(loop);
    std::printf("stable for all k in (0,4): %s\n", stab.stable_all_gains ? "yes" : "no");
    for (const CriticalGain& g : stab.critical_gains)
        std::printf("  axis crossing at k = %.6f, omega = %.6f\n", g.k, g.omega);

    for (int n : {1, 10, 100}) {
        const PeakProbe peak = probe_peak(loop, 0.0, n);
        const IntegralReport bode = bode_integral(loop, n);
        std::printf("N = %3d  peak |S_N| = %.6f at omega = %.5f   int ln|S_N| = %+.2e (err %.1e)\n", n,
                    peak.peak_mag, peak.omega_peak, bode.value, bode.error_estimate);
    }
    return 0;
}
