// Per-scheme primitives behind the dispatching API in helb/phe.h.
#ifndef HELB_SRC_PHE_SCHEMES_H_
#define HELB_SRC_PHE_SCHEMES_H_

#include "helb/phe.h"

namespace helb::phe::detail {

// Retry budget for rejection loops in key generation (divisibility and
// non-residue searches).
inline constexpr int kKeygenRetries = 100000;

void CheckKeygenMode(unsigned security_bits, const KeygenOptions& opts,
                     const RandomSource& rng);
// Two distinct primes of `bits` bits each.
std::pair<BigUint, BigUint> DistinctPrimes(std::size_t bits, RandomSource& rng);
// Uniform element of Z*_n.
BigUint RandomUnit(const BigUint& n, RandomSource& rng);

PaillierKeys PaillierKeyGen(unsigned bits, RandomSource& rng);
BigUint PaillierEncrypt(const PaillierKeys::Public& pub, const BigUint& m,
                        RandomSource& rng);
BigUint PaillierDecrypt(const PaillierKeys& keys, const BigUint& c);

DamgardJurikKeys DamgardJurikKeyGen(unsigned bits, unsigned s,
                                    RandomSource& rng);
BigUint DamgardJurikEncrypt(const DamgardJurikKeys::Public& pub,
                            const BigUint& m, RandomSource& rng);
BigUint DamgardJurikDecrypt(const DamgardJurikKeys& keys, const BigUint& c);
BigUint DamgardJurikCiphertextModulus(const DamgardJurikKeys::Public& pub);
BigUint DamgardJurikMessageModulus(const DamgardJurikKeys::Public& pub);

OkamotoUchiyamaKeys OkamotoUchiyamaKeyGen(unsigned bits, RandomSource& rng);
BigUint OkamotoUchiyamaEncrypt(const OkamotoUchiyamaKeys::Public& pub,
                               const BigUint& m, RandomSource& rng);
BigUint OkamotoUchiyamaDecrypt(const OkamotoUchiyamaKeys& keys,
                               const BigUint& c);
BigUint OkamotoUchiyamaMessageBound(const OkamotoUchiyamaKeys::Public& pub);

BenalohKeys BenalohKeyGen(unsigned bits, const BigUint& block,
                          RandomSource& rng);
BigUint BenalohEncrypt(const BenalohKeys::Public& pub, const BigUint& m,
                       RandomSource& rng);
BigUint BenalohDecrypt(const BenalohKeys& keys, const BigUint& c);
bool BenalohIsZero(const BenalohKeys& keys, const BigUint& c);
BigUint BenalohDefaultBlock();

NaccacheSternKeys NaccacheSternKeyGen(unsigned bits, unsigned message_bits,
                                      RandomSource& rng);
BigUint NaccacheSternEncrypt(const NaccacheSternKeys::Public& pub,
                             const BigUint& m);
BigUint NaccacheSternDecrypt(const NaccacheSternKeys& keys, const BigUint& c);
bool NaccacheSternIsZero(const NaccacheSternKeys& keys, const BigUint& c);

GoldwasserMicaliKeys GoldwasserMicaliKeyGen(unsigned bits, RandomSource& rng);
std::vector<BigUint> GoldwasserMicaliEncrypt(
    const GoldwasserMicaliKeys::Public& pub, const BigUint& m, unsigned width,
    RandomSource& rng);
BigUint GoldwasserMicaliDecrypt(const GoldwasserMicaliKeys& keys,
                                const std::vector<BigUint>& bits);
bool GoldwasserMicaliIsZero(const GoldwasserMicaliKeys& keys,
                            const std::vector<BigUint>& bits);

}  // namespace helb::phe::detail

#endif  // HELB_SRC_PHE_SCHEMES_H_
