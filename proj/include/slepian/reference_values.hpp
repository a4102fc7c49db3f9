#ifndef SLEPIAN_REFERENCE_VALUES_HPP
#define SLEPIAN_REFERENCE_VALUES_HPP

// Published power tables (4 decimals) used as reproduction targets.

#include <array>
#include <span>

namespace slepian {

struct PowerTableEntry {
  double h;
  double mu;
  double value;
};

/// Thresholds of the three tables and the run lengths they correspond to.
inline constexpr std::array<double, 3> kTableThresholds{3.11, 3.63, 3.83};
inline constexpr std::array<double, 3> kTableTargetArl{100.0, 500.0, 1000.0};

/// gamma(0, h, mu): the flat-down-up barrier ratio.
inline constexpr std::array<PowerTableEntry, 39> kTableGamma{{
    {3.11, 2.00, 0.3052}, {3.11, 2.25, 0.3876}, {3.11, 2.50, 0.4765}, {3.11, 2.75, 0.5676}, {3.11, 3.00, 0.6559},
    {3.11, 3.25, 0.7371}, {3.11, 3.50, 0.8075}, {3.11, 3.75, 0.8653}, {3.11, 4.00, 0.9101}, {3.11, 4.25, 0.9429},
    {3.11, 4.50, 0.9655}, {3.11, 4.75, 0.9802}, {3.11, 5.00, 0.9892},
    {3.63, 2.00, 0.1384}, {3.63, 2.25, 0.1946}, {3.63, 2.50, 0.2638}, {3.63, 2.75, 0.3445}, {3.63, 3.00, 0.4338},
    {3.63, 3.25, 0.5272}, {3.63, 3.50, 0.6197}, {3.63, 3.75, 0.7061}, {3.63, 4.00, 0.7824}, {3.63, 4.25, 0.8461},
    {3.63, 4.50, 0.8961}, {3.63, 4.75, 0.9332}, {3.63, 5.00, 0.9592},
    {3.83, 2.00, 0.0956}, {3.83, 2.25, 0.1402}, {3.83, 2.50, 0.1979}, {3.83, 2.75, 0.2687}, {3.83, 3.00, 0.3510},
    {3.83, 3.25, 0.4416}, {3.83, 3.50, 0.5358}, {3.83, 3.75, 0.6285}, {3.83, 4.00, 0.7146}, {3.83, 4.25, 0.7900},
    {3.83, 4.50, 0.8525}, {3.83, 4.75, 0.9011}, {3.83, 5.00, 0.9370},
}};

/// gamma1(0, h, mu): the down-up barrier without the flat first segment.
inline constexpr std::array<PowerTableEntry, 21> kTableGamma1{{
    {3.11, 2.0, 0.2918}, {3.11, 2.5, 0.4645}, {3.11, 3.0, 0.6471}, {3.11, 3.5, 0.8021},
    {3.11, 4.0, 0.9075}, {3.11, 4.5, 0.9644}, {3.11, 5.0, 0.9889},
    {3.63, 2.0, 0.1310}, {3.63, 2.5, 0.2553}, {3.63, 3.0, 0.4256}, {3.63, 3.5, 0.6132},
    {3.63, 4.0, 0.7783}, {3.63, 4.5, 0.8940}, {3.63, 5.0, 0.9583},
    {3.83, 2.0, 0.0903}, {3.83, 2.5, 0.1911}, {3.83, 3.0, 0.3438}, {3.83, 3.5, 0.5295},
    {3.83, 4.0, 0.7101}, {3.83, 4.5, 0.8499}, {3.83, 5.0, 0.9358},
}};

/// gamma2(h, mu): gamma1 averaged over the stationary start density.
inline constexpr std::array<PowerTableEntry, 21> kTableGamma2{{
    {3.11, 2.0, 0.3047}, {3.11, 2.5, 0.4760}, {3.11, 3.0, 0.6555}, {3.11, 3.5, 0.8073},
    {3.11, 4.0, 0.9100}, {3.11, 4.5, 0.9654}, {3.11, 5.0, 0.9892},
    {3.63, 2.0, 0.1383}, {3.63, 2.5, 0.2637}, {3.63, 3.0, 0.4337}, {3.63, 3.5, 0.6196},
    {3.63, 4.0, 0.7824}, {3.63, 4.5, 0.8961}, {3.63, 5.0, 0.9592},
    {3.83, 2.0, 0.0956}, {3.83, 2.5, 0.1978}, {3.83, 3.0, 0.3509}, {3.83, 3.5, 0.5358},
    {3.83, 4.0, 0.7146}, {3.83, 4.5, 0.8524}, {3.83, 5.0, 0.9370},
}};

/// gamma3(0, h, mu): the flat-down barrier ratio.
inline constexpr std::array<PowerTableEntry, 21> kTableGamma3{{
    {3.11, 2.0, 0.2389}, {3.11, 2.5, 0.4017}, {3.11, 3.0, 0.5873}, {3.11, 3.5, 0.7567},
    {3.11, 4.0, 0.8801}, {3.11, 4.5, 0.9514}, {3.11, 5.0, 0.9840},
    {3.63, 2.0, 0.1039}, {3.63, 2.5, 0.2131}, {3.63, 3.0, 0.3731}, {3.63, 3.5, 0.5611},
    {3.63, 4.0, 0.7373}, {3.63, 4.5, 0.8685}, {3.63, 5.0, 0.9458},
    {3.83, 2.0, 0.0708}, {3.83, 2.5, 0.1575}, {3.83, 3.0, 0.2974}, {3.83, 3.5, 0.4785},
    {3.83, 4.0, 0.6657}, {3.83, 4.5, 0.8194}, {3.83, 5.0, 0.9192},
}};

/// Entries of table 1..4.
inline std::span<const PowerTableEntry> published_table(int which) {
  switch (which) {
    case 1: return kTableGamma;
    case 2: return kTableGamma1;
    case 3: return kTableGamma2;
    case 4: return kTableGamma3;
    default: return {};
  }
}

/// Allowed reproduction error per table.
inline double published_table_tolerance(int which) { return which == 2 ? 0.001 : 0.002; }

}  // namespace slepian

#endif  // SLEPIAN_REFERENCE_VALUES_HPP
