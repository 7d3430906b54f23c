// Shows how an addressing tone observed below Nyquist maps back to the
// plausible true drive frequencies.

#include <cstdio>

#include <rfsc/rfsc.hpp>

int main() {
  const double fs = 122.88e6;
  const double observed[] = {6.7745e6, 8.112e6, 9.57e6};

  for (double f : observed) {
    std::printf("alias %.4f MHz ->", f / 1e6);
    for (double cand : rfsc::dealias_candidates(f, fs, 2))
      std::printf(" %.4f", cand / 1e6);
    std::printf(" MHz\n");
  }
  return 0;
}
