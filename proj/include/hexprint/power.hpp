#pragma once

#include <stdexcept>
#include <vector>

namespace hexprint {

class BatteryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A (remaining-charge fraction, voltage) knot of the discharge curve.
struct DischargeKnot {
    double remaining_fraction = 0.0; // 1 = full, 0 = empty
    double voltage = 0.0;
};

struct BatteryState {
    double v_max = 16.8;          // V, fully charged (4S)
    double v_min = 13.2;          // V, minimum safe
    double v_measured = 16.8;     // V
    double capacity_c = 18000.0;  // C (5 Ah)
    double consumed_c = 0.0;      // C
};

/// Open-circuit voltage as a monotone piecewise-cubic (Fritsch-Carlson) curve of
/// remaining charge. Endpoints are pinned to v_min at empty and v_max at full.
class DischargeCurve {
public:
    /// Default LiPo-like shape: steep near full, flat in the middle, steep near empty.
    static DischargeCurve lipo_default(double v_max, double v_min);

    /// Interior knots only; full/empty endpoints are added from v_max/v_min.
    DischargeCurve(double v_max, double v_min, std::vector<DischargeKnot> interior);

    double voltage(double remaining_fraction) const;
    const std::vector<DischargeKnot>& knots() const { return knots_; }
    std::vector<DischargeKnot> interior_knots() const;

private:
    std::vector<DischargeKnot> knots_; // sorted by remaining_fraction ascending
    std::vector<double> slopes_;
};

/// Coefficients of T(v) = a (v/100 - c)^3 + b.
struct ThrustCurve {
    double a = -60.0;
    double b = 47.0;
    double c = 0.62;
};

/// Current drawn by the motors, proportional to the thrust command.
struct CurrentModel {
    double amps_per_percent = 0.6;
};

/// Fraction of nominal thrust the propulsion delivers at a given remaining-voltage
/// percentage; tabulated, linearly interpolated, clamped at the table ends.
struct ThrustEfficiencyTable {
    std::vector<double> v_remaining;  // ascending percent
    std::vector<double> efficiency;

    static ThrustEfficiencyTable defaults();
    static ThrustEfficiencyTable ideal(); // efficiency 1 everywhere
    double at(double v_remaining_percent) const;
    void validate() const;
};

/// 100 (V_measured - V_min) / (V_max - V_min).
double v_remaining(const BatteryState& battery);

/// Commanded thrust percent for a remaining-voltage percentage.
/// Sets *extrapolated (when given) if v lies outside the plotted range [35, 100].
double thrust_command(double v_remaining_percent, const ThrustCurve& curve, bool* extrapolated = nullptr);

/// Drains charge for dt seconds at the given thrust command and updates v_measured.
/// Throws BatteryError once consumed charge exceeds capacity.
BatteryState discharge_step(const BatteryState& battery, double thrust_percent, double dt,
                            const DischargeCurve& curve, const CurrentModel& current);

}  // namespace hexprint
