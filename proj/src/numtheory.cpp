#include "fgdesc/numtheory.hpp"

#include <algorithm>
#include <stdexcept>

namespace fgdesc {

int paper_log(long long m) {
  if (m < 1) throw std::invalid_argument("paper_log requires m >= 1");
  int r = 0;
  long long pow = 1;
  while (pow < m) {
    pow <<= 1;
    ++r;
  }
  return r;
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<long long, int>> factorize(long long n) {
  if (n < 1) throw std::invalid_argument("factorize requires n >= 1");
  std::vector<std::pair<long long, int>> out;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

int lambda_omega(long long n) {
  int total = 0;
  for (auto [p, e] : factorize(n)) total += e;
  return total;
}

bool is_prime_power(long long q, long long* p, int* n) {
  if (q < 2) return false;
  auto f = factorize(q);
  if (f.size() != 1) return false;
  if (p) *p = f[0].first;
  if (n) *n = f[0].second;
  return true;
}

std::vector<long long> divisors_of(long long n) {
  std::vector<long long> ds;
  for (long long d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      ds.push_back(d);
      if (d != n / d) ds.push_back(n / d);
    }
  std::sort(ds.begin(), ds.end());
  return ds;
}

}  // namespace fgdesc
