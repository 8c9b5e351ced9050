// Copyright 2026 The fedfeare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace fedfeare {

// Deterministic random source for key generation, encryption randomness,
// and masking. Mersenne Twister seeded explicitly; two instances with the
// same seed produce the same stream.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Uniform integer with exactly `bits` random bits.
  mpz_class bits(unsigned long bits);

  // Uniform integer in [0, bound); bound must be positive.
  mpz_class below(const mpz_class& bound);

 private:
  gmp_randclass gen_;
};

// Additively homomorphic keypair with generator fixed to n + 1, which turns
// g^m into 1 + m*n (mod n^2). key_id fingerprints the modulus so ciphertexts
// can refuse operations under the wrong key.
struct PublicKey {
  mpz_class n;
  mpz_class n_squared;
  std::string key_id;
};

struct PrivateKey {
  mpz_class lambda;  // lcm(p - 1, q - 1)
  mpz_class mu;      // (L(g^lambda mod n^2))^-1 mod n
};

struct Ciphertext {
  mpz_class value;  // in [0, n^2)
  std::string key_id;
};

std::string fingerprint_modulus(const mpz_class& n);

// Generates distinct primes of bit_length / 2 bits each with
// gcd(pq, (p-1)(q-1)) = 1. Deterministic per Rng state. Throws
// Error{KeygenFailure} when no usable pair exists at this size (tiny
// bit lengths exhaust their prime pool).
std::pair<PublicKey, PrivateKey> keygen(unsigned bit_length, Rng& rng);

// c = (1 + m*n) * r^n mod n^2 with fresh r coprime to n. Requires
// 0 <= m < n (throws Error{PlaintextRange}); this toolkit only ever
// encrypts counts and masks, so the negative range is not mapped.
Ciphertext encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng);

mpz_class decrypt(const PrivateKey& sk, const PublicKey& pk,
                  const Ciphertext& c);

// Homomorphic sum: Dec(c_add(a, b)) = Dec(a) + Dec(b) mod n.
Ciphertext c_add(const PublicKey& pk, const Ciphertext& a,
                 const Ciphertext& b);

// Homomorphic scaling: Dec(c_scalar_mul(a, k)) = k * Dec(a) mod n,
// for 0 <= k < n.
Ciphertext c_scalar_mul(const PublicKey& pk, const Ciphertext& a,
                        const mpz_class& k);

// Additive identity (the trivial encryption of 0 with r = 1). Used to seed
// homomorphic accumulators; it is recognizable on the wire, so parties only
// ever send it combined with at least one real ciphertext.
Ciphertext identity_ciphertext(const PublicKey& pk);

// Lowercase-hex codecs used by the wire format.
std::string to_hex(const mpz_class& x);
mpz_class from_hex(const std::string& hex);

}  // namespace fedfeare
