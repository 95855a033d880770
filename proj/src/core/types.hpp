#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ias {

// Discrete therapy mode. Transitions only via e1 (ON -> OFF, PSA hits the
// lower threshold from above) and e2 (OFF -> ON, PSA hits the upper
// threshold from below).
enum class Mode : uint8_t { On = 0, Off = 1 };

inline const char* mode_name(Mode m) { return m == Mode::On ? "ON" : "OFF"; }

enum class EventKind : uint8_t { E1 = 1, E2 = 2 };

inline const char* event_name(EventKind k) { return k == EventKind::E1 ? "e1" : "e2"; }

// Biological rate constants and PSA coefficients. Units in days and
// model-specific concentration/PSA units; c1 = c2 = 1 so the PSA level is
// x1 + x2 directly.
struct ModelParams {
    double alpha1 = 0.045;   // HSC proliferation rate, 1/day
    double alpha2 = 0.027;   // CRC proliferation rate, 1/day
    double beta1 = 0.038;    // HSC apoptosis rate, 1/day
    double beta2 = 0.019;    // CRC apoptosis rate, 1/day
    double k1 = 8.0;         // proliferation sigmoid center
    double k2 = 0.55;        // proliferation sigmoid steepness
    double k3 = 6.0;         // apoptosis sigmoid center
    double k4 = -0.6;        // apoptosis sigmoid steepness
    double m1 = 3e-4;        // HSC -> CRC conversion rate, 1/day
    double d = 1.0;          // CRC androgen-sensitivity factor
    double x30 = 20.0;       // patient-specific androgen constant
    double sigma = 4.0;      // androgen degradation time constant, days
    double lambda1 = 2e-3;   // HSC basal degradation, 1/day
    double mu1 = 0.02;       // HSC basal production, cells/day
    double mu3 = 0.15;       // androgen basal production, concentration/day
    double c1 = 1.0;         // PSA coefficient of x1 (fixed)
    double c2 = 1.0;         // PSA coefficient of x2 (fixed)

    void validate() const;
};

// Controllable PSA thresholds with their feasible box. The hysteresis gap is
// guaranteed by theta1_max < theta2_min.
struct Thresholds {
    double theta1 = 5.0;
    double theta2 = 9.0;
    double theta1_min = 3.5;
    double theta1_max = 6.5;
    double theta2_min = 7.5;
    double theta2_max = 12.0;

    void validate() const;
};

// Full hybrid state at a time instant. z1 is frozen while OFF, z2 while ON.
struct HybridState {
    double t = 0.0;
    Mode q = Mode::On;
    double x1 = 0.0;   // HSC population (PSA-equivalent units)
    double x2 = 0.0;   // CRC population
    double x3 = 0.0;   // serum androgen concentration
    double z1 = 0.0;   // time spent on-treatment this cycle, days
    double z2 = 0.0;   // time spent off-treatment this cycle, days

    double psa() const { return x1 + x2; }
};

// State-derivative matrix wrt (theta1, theta2). xprime[n][i] = dx_{n+1}/dtheta_{i+1},
// zprime[j][i] = dz_{j+1}/dtheta_{i+1}. All zero at t = 0 (initial conditions
// do not depend on theta).
struct IpaState {
    std::array<std::array<double, 2>, 3> xprime{{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}};
    std::array<std::array<double, 2>, 2> zprime{{{0.0, 0.0}, {0.0, 0.0}}};

    double psa_prime(int i) const { return xprime[0][i] + xprime[1][i]; }
};

// Thrown when an event crossing is non-transversal: the Lemma-1 denominator
// |f^{x1} + f^{x2}| fell below the floor and the event-time derivative is
// undefined.
class TangentialCrossing : public std::runtime_error {
public:
    explicit TangentialCrossing(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a path exceeds max_events, typically because theta2 - theta1
// is too small relative to the noise level.
class RunawayChatter : public std::runtime_error {
public:
    explicit RunawayChatter(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ias
