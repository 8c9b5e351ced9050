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

#include "fedfeare/paillier.hpp"

#include <algorithm>
#include <cctype>

#include "fedfeare/error.hpp"

namespace fedfeare {

Rng::Rng(uint64_t seed) : gen_(gmp_randinit_mt) {
  mpz_class s;
  mpz_import(s.get_mpz_t(), 1, 1, sizeof(seed), 0, 0, &seed);
  gen_.seed(s);
}

mpz_class Rng::bits(unsigned long bits) {
  mpz_class out = gen_.get_z_bits(bits);
  return out;
}

mpz_class Rng::below(const mpz_class& bound) {
  if (bound <= 0) {
    throw Error(Errc::Precondition, "random bound must be positive");
  }
  mpz_class out = gen_.get_z_range(bound);
  return out;
}

std::string fingerprint_modulus(const mpz_class& n) {
  std::string hex = to_hex(n);
  return hex.substr(0, std::min<size_t>(16, hex.size()));
}

namespace {

void require_same_key(const PublicKey& pk, const Ciphertext& c) {
  if (c.key_id != pk.key_id) {
    throw Error(Errc::KeyMismatch, "ciphertext was made under another key");
  }
}

mpz_class random_prime(unsigned long bits, Rng& rng) {
  // Top bit forced so the product lands at the requested size, low bit
  // forced so the candidate is odd.
  mpz_class candidate = rng.bits(bits);
  mpz_setbit(candidate.get_mpz_t(), bits - 1);
  mpz_setbit(candidate.get_mpz_t(), 0);
  while (mpz_probab_prime_p(candidate.get_mpz_t(), 40) == 0) {
    candidate += 2;
    if (mpz_sizeinbase(candidate.get_mpz_t(), 2) > bits) {
      candidate = rng.bits(bits);
      mpz_setbit(candidate.get_mpz_t(), bits - 1);
      mpz_setbit(candidate.get_mpz_t(), 0);
    }
  }
  return candidate;
}

}  // namespace

std::pair<PublicKey, PrivateKey> keygen(unsigned bit_length, Rng& rng) {
  if (bit_length < 4) {
    throw Error(Errc::KeygenFailure, "bit length leaves no room for primes");
  }
  const unsigned long half = bit_length / 2;
  for (int attempt = 0; attempt < 200; ++attempt) {
    mpz_class p = random_prime(half, rng);
    mpz_class q = random_prime(half, rng);
    if (p == q) continue;
    mpz_class n = p * q;
    mpz_class totient = (p - 1) * (q - 1);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), totient.get_mpz_t());
    if (g != 1) continue;

    PublicKey pk;
    pk.n = n;
    pk.n_squared = n * n;
    pk.key_id = fingerprint_modulus(n);

    PrivateKey sk;
    mpz_lcm(sk.lambda.get_mpz_t(), mpz_class(p - 1).get_mpz_t(),
            mpz_class(q - 1).get_mpz_t());
    // mu = (L(g^lambda mod n^2))^-1 where g = n + 1 and L(x) = (x - 1) / n.
    mpz_class gl;
    mpz_class base = n + 1;
    mpz_powm(gl.get_mpz_t(), base.get_mpz_t(), sk.lambda.get_mpz_t(),
             pk.n_squared.get_mpz_t());
    mpz_class l = (gl - 1) / n;
    if (mpz_invert(sk.mu.get_mpz_t(), l.get_mpz_t(), n.get_mpz_t()) == 0) {
      continue;
    }
    return {std::move(pk), std::move(sk)};
  }
  throw Error(Errc::KeygenFailure, "no usable prime pair found");
}

Ciphertext encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng) {
  if (m < 0 || m >= pk.n) {
    throw Error(Errc::PlaintextRange, "plaintext outside [0, n)");
  }
  mpz_class r;
  mpz_class g;
  do {
    r = rng.below(pk.n - 1) + 1;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t());
  } while (g != 1);
  mpz_class rn;
  mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t(),
           pk.n_squared.get_mpz_t());
  mpz_class gm = (1 + m * pk.n) % pk.n_squared;
  Ciphertext c;
  c.value = (gm * rn) % pk.n_squared;
  c.key_id = pk.key_id;
  return c;
}

mpz_class decrypt(const PrivateKey& sk, const PublicKey& pk,
                  const Ciphertext& c) {
  require_same_key(pk, c);
  if (c.value < 0 || c.value >= pk.n_squared) {
    throw Error(Errc::PlaintextRange, "ciphertext outside [0, n^2)");
  }
  mpz_class x;
  mpz_powm(x.get_mpz_t(), c.value.get_mpz_t(), sk.lambda.get_mpz_t(),
           pk.n_squared.get_mpz_t());
  mpz_class l = (x - 1) / pk.n;
  return (l * sk.mu) % pk.n;
}

Ciphertext c_add(const PublicKey& pk, const Ciphertext& a,
                 const Ciphertext& b) {
  require_same_key(pk, a);
  require_same_key(pk, b);
  Ciphertext out;
  out.value = (a.value * b.value) % pk.n_squared;
  out.key_id = pk.key_id;
  return out;
}

Ciphertext c_scalar_mul(const PublicKey& pk, const Ciphertext& a,
                        const mpz_class& k) {
  require_same_key(pk, a);
  if (k < 0 || k >= pk.n) {
    throw Error(Errc::PlaintextRange, "scalar outside [0, n)");
  }
  Ciphertext out;
  mpz_powm(out.value.get_mpz_t(), a.value.get_mpz_t(), k.get_mpz_t(),
           pk.n_squared.get_mpz_t());
  out.key_id = pk.key_id;
  return out;
}

Ciphertext identity_ciphertext(const PublicKey& pk) {
  return Ciphertext{mpz_class(1), pk.key_id};
}

std::string to_hex(const mpz_class& x) {
  if (x < 0) {
    throw Error(Errc::Precondition, "hex codec handles nonnegative values");
  }
  return x.get_str(16);
}

mpz_class from_hex(const std::string& hex) {
  if (hex.empty()) {
    throw Error(Errc::MalformedFrame, "empty hex field");
  }
  for (char ch : hex) {
    bool ok = (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f');
    if (!ok) throw Error(Errc::MalformedFrame, "invalid hex digit");
  }
  mpz_class out;
  out.set_str(hex, 16);
  return out;
}

}  // namespace fedfeare
