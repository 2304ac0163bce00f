#include "hexprint/power.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hexprint {

DischargeCurve DischargeCurve::lipo_default(double v_max, double v_min)
{
    // Knots at 90% and 40% remaining charge, expressed as fractions of the voltage span.
    const double span = v_max - v_min;
    return DischargeCurve(v_max, v_min,
                          {{0.4, v_min + 0.47 * span}, {0.9, v_min + 0.72 * span}});
}

DischargeCurve::DischargeCurve(double v_max, double v_min, std::vector<DischargeKnot> interior)
{
    if (!(v_max > v_min)) {
        throw BatteryError("discharge curve needs v_max > v_min");
    }
    knots_.push_back({0.0, v_min});
    std::sort(interior.begin(), interior.end(),
              [](const DischargeKnot& a, const DischargeKnot& b) { return a.remaining_fraction < b.remaining_fraction; });
    for (const auto& k : interior) {
        if (!(k.remaining_fraction > knots_.back().remaining_fraction && k.remaining_fraction < 1.0)) {
            throw BatteryError("discharge knots must be strictly inside (0, 1) and distinct");
        }
        if (!(k.voltage >= knots_.back().voltage && k.voltage <= v_max)) {
            throw BatteryError("discharge knots must be monotone within [v_min, v_max]");
        }
        knots_.push_back(k);
    }
    knots_.push_back({1.0, v_max});

    // Fritsch-Carlson monotone tangents.
    const std::size_t n = knots_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        secant[i] = (knots_[i + 1].voltage - knots_[i].voltage)
                    / (knots_[i + 1].remaining_fraction - knots_[i].remaining_fraction);
    }
    slopes_.assign(n, 0.0);
    slopes_.front() = secant.front();
    slopes_.back() = secant.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        slopes_[i] = secant[i - 1] * secant[i] <= 0.0 ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (secant[i] == 0.0) {
            slopes_[i] = slopes_[i + 1] = 0.0;
            continue;
        }
        const double alpha = slopes_[i] / secant[i];
        const double beta = slopes_[i + 1] / secant[i];
        const double r2 = alpha * alpha + beta * beta;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            slopes_[i] = tau * alpha * secant[i];
            slopes_[i + 1] = tau * beta * secant[i];
        }
    }
}

double DischargeCurve::voltage(double remaining_fraction) const
{
    const double x = std::clamp(remaining_fraction, 0.0, 1.0);
    std::size_t i = 0;
    while (i + 2 < knots_.size() && x > knots_[i + 1].remaining_fraction) {
        ++i;
    }
    const auto& k0 = knots_[i];
    const auto& k1 = knots_[i + 1];
    const double h = k1.remaining_fraction - k0.remaining_fraction;
    const double t = (x - k0.remaining_fraction) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * k0.voltage + h10 * h * slopes_[i] + h01 * k1.voltage + h11 * h * slopes_[i + 1];
}

std::vector<DischargeKnot> DischargeCurve::interior_knots() const
{
    return {knots_.begin() + 1, knots_.end() - 1};
}

ThrustEfficiencyTable ThrustEfficiencyTable::defaults()
{
    // Thrust loss of the reference vehicle as the pack sags.
    return {{30, 40, 50, 62, 70, 80, 90, 100},
            {0.8926, 0.9175, 0.9279, 0.9300, 0.9306, 0.9369, 0.9568, 1.0}};
}

ThrustEfficiencyTable ThrustEfficiencyTable::ideal()
{
    return {{0.0, 100.0}, {1.0, 1.0}};
}

void ThrustEfficiencyTable::validate() const
{
    if (v_remaining.empty() || v_remaining.size() != efficiency.size()) {
        throw BatteryError("thrust efficiency table needs matching, non-empty columns");
    }
    for (std::size_t i = 1; i < v_remaining.size(); ++i) {
        if (!(v_remaining[i] > v_remaining[i - 1])) {
            throw BatteryError("thrust efficiency table must be strictly ascending in v_remaining");
        }
    }
    for (double e : efficiency) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw BatteryError("thrust efficiency must be positive");
        }
    }
}

double ThrustEfficiencyTable::at(double v) const
{
    if (v <= v_remaining.front()) {
        return efficiency.front();
    }
    if (v >= v_remaining.back()) {
        return efficiency.back();
    }
    const auto hi = std::upper_bound(v_remaining.begin(), v_remaining.end(), v);
    const std::size_t j = static_cast<std::size_t>(hi - v_remaining.begin());
    const double t = (v - v_remaining[j - 1]) / (v_remaining[j] - v_remaining[j - 1]);
    return efficiency[j - 1] + t * (efficiency[j] - efficiency[j - 1]);
}

double v_remaining(const BatteryState& battery)
{
    if (!(battery.v_max != battery.v_min)) {
        throw BatteryError("invalid battery config: v_max equals v_min");
    }
    if (!(battery.v_max > battery.v_min)) {
        throw BatteryError("invalid battery config: v_max below v_min");
    }
    return 100.0 * ((battery.v_measured - battery.v_min) / (battery.v_max - battery.v_min));
}

double thrust_command(double v, const ThrustCurve& curve, bool* extrapolated)
{
    if (extrapolated != nullptr) {
        *extrapolated = v < 35.0 || v > 100.0;
    }
    const double u = v / 100.0 - curve.c;
    return curve.a * (u * u * u) + curve.b;
}

BatteryState discharge_step(const BatteryState& battery, double thrust_percent, double dt,
                            const DischargeCurve& curve, const CurrentModel& current)
{
    if (!(dt > 0.0)) {
        throw BatteryError("discharge_step requires dt > 0");
    }
    BatteryState next = battery;
    next.consumed_c += current.amps_per_percent * std::max(0.0, thrust_percent) * dt;
    if (next.consumed_c > next.capacity_c) {
        std::ostringstream msg;
        msg << "battery exhausted: consumed " << next.consumed_c << " C of " << next.capacity_c << " C";
        throw BatteryError(msg.str());
    }
    next.v_measured = curve.voltage(1.0 - next.consumed_c / next.capacity_c);
    return next;
}

}  // namespace hexprint
