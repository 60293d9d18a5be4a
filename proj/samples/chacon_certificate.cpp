// Produces, serializes and re-checks an imbalance certificate for a letter of
// the Chacon substitution.

#include <iostream>

#include "balans.hpp"

int main() {
  using namespace balans;
  Substitution chacon = Substitution::parse("1->1123;2->23;3->123");
  Word v = chacon.alphabet().parse("1");
  std::cout << "frequency of 1: " << exact_frequency(chacon, v) << "\n";

  auto cert = divisibility_certificate(chacon, v);
  if (!cert) {
    std::cout << "no certificate\n";
    return 1;
  }
  Json j = to_json(*cert);
  std::cout << j.dump(2) << "\n";
  VerifyResult vr = verify_certificate(certificate_from_json(Json::parse(j.dump())));
  std::cout << (vr.ok ? "verified" : "rejected: " + vr.reason) << "\n";
  return vr.ok ? 0 : 1;
}
