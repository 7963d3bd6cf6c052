#include <cmath>

#include "cotv/distributions.hpp"

int main() {
  return std::fabs(cotv::ServiceTimeModel::exponential(2.0).mean() - 0.5) < 1e-15 ? 0 : 1;
}
