#pragma once

#include <cmath>

namespace uavsc::units {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// SNR threshold 2^R - 1 for a rate in bits per channel use.
inline double snr_threshold(double rate_bpcu) { return std::expm1(rate_bpcu * std::log(2.0)); }

}  // namespace uavsc::units
