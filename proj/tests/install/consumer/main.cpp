#include <cmath>

#include "svmrates/rates.hpp"

int main() { return std::abs(svmrates::beta(1.0, 2.0) - 8.0 / 19.0) < 1e-15 ? 0 : 1; }
