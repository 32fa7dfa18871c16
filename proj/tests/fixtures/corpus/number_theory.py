# Small number-theory toolbox: divisibility, primes, digit games.


def gcd_pair(alpha, beta):
    while beta:
        alpha, beta = beta, alpha % beta
    return abs(alpha)


def lcm_pair(alpha, beta):
    if alpha == 0 or beta == 0:
        return 0
    return abs(alpha * beta) // gcd_pair(alpha, beta)


def gcd_many(values):
    acc = 0
    for item in values:
        acc = gcd_pair(acc, item)
    return acc


def is_prime(num):
    if num < 2:
        return False
    if num < 4:
        return True
    if num % 2 == 0:
        return False
    probe = 3
    while probe * probe <= num:
        if num % probe == 0:
            return False
        probe += 2
    return True


def primes_below(limit):
    if limit < 3:
        return []
    flags = [True] * limit
    flags[0] = flags[1] = False
    probe = 2
    while probe * probe < limit:
        if flags[probe]:
            hop = probe * probe
            while hop < limit:
                flags[hop] = False
                hop += probe
        probe += 1
    found = []
    for pos in range(limit):
        if flags[pos]:
            found.append(pos)
    return found


def factorize(num):
    factors = []
    rest = num
    probe = 2
    while probe * probe <= rest:
        while rest % probe == 0:
            factors.append(probe)
            rest //= probe
        probe += 1
    if rest > 1:
        factors.append(rest)
    return factors


def divisor_count(num):
    count = 0
    probe = 1
    while probe * probe <= num:
        if num % probe == 0:
            count += 2
            if probe * probe == num:
                count -= 1
        probe += 1
    return count


def divisor_total(num):
    total = 0
    probe = 1
    while probe * probe <= num:
        if num % probe == 0:
            total += probe
            partner = num // probe
            if partner != probe:
                total += partner
        probe += 1
    return total


def is_perfect(num):
    return num > 1 and divisor_total(num) - num == num


def digits_of(num):
    if num == 0:
        return [0]
    out = []
    rest = abs(num)
    while rest:
        out.append(rest % 10)
        rest //= 10
    out.reverse()
    return out


def digit_total(num):
    total = 0
    for digit in digits_of(num):
        total += digit
    return total


def digital_root(num):
    cur = abs(num)
    while cur >= 10:
        cur = digit_total(cur)
    return cur


def reverse_number(num):
    out = 0
    rest = abs(num)
    while rest:
        out = out * 10 + rest % 10
        rest //= 10
    return out


def is_palindrome_number(num):
    return num >= 0 and reverse_number(num) == num


def collatz_steps(num):
    steps = 0
    cur = num
    while cur != 1:
        if cur % 2 == 0:
            cur //= 2
        else:
            cur = 3 * cur + 1
        steps += 1
    return steps


def fib_upto(limit):
    seq = []
    small, big = 0, 1
    while small <= limit:
        seq.append(small)
        small, big = big, small + big
    return seq


def fib_at(index):
    small, big = 0, 1
    for _ in range(index):
        small, big = big, small + big
    return small


def power_mod(base, exp, mod):
    if mod == 1:
        return 0
    acc = 1
    cur = base % mod
    rest = exp
    while rest > 0:
        if rest & 1:
            acc = acc * cur % mod
        cur = cur * cur % mod
        rest >>= 1
    return acc


def extended_gcd(alpha, beta):
    old_r, rem = alpha, beta
    old_s, coef = 1, 0
    while rem:
        quot = old_r // rem
        old_r, rem = rem, old_r - quot * rem
        old_s, coef = coef, old_s - quot * coef
    if alpha:
        other = (old_r - old_s * alpha) // beta if beta else 0
    else:
        other = 0
    return old_r, old_s, other


def mod_inverse(num, mod):
    seed, coef, _ = extended_gcd(num % mod, mod)
    if seed != 1:
        return None
    return coef % mod


def binomial(total, pick):
    if pick < 0 or pick > total:
        return 0
    pick = min(pick, total - pick)
    acc = 1
    for step in range(pick):
        acc = acc * (total - step) // (step + 1)
    return acc


def triangular(index):
    return index * (index + 1) // 2


def is_square(num):
    if num < 0:
        return False
    root = int(num ** 0.5)
    for cand in (root - 1, root, root + 1):
        if cand >= 0 and cand * cand == num:
            return True
    return False


def base_digits(num, base):
    if num == 0:
        return [0]
    out = []
    rest = num
    while rest:
        out.append(rest % base)
        rest //= base
    out.reverse()
    return out


def from_base_digits(digits, base):
    acc = 0
    for digit in digits:
        acc = acc * base + digit
    return acc


def totient(num):
    result = num
    rest = num
    probe = 2
    while probe * probe <= rest:
        if rest % probe == 0:
            while rest % probe == 0:
                rest //= probe
            result -= result // probe
        probe += 1
    if rest > 1:
        result -= result // rest
    return result


def happy_steps(num, cap):
    cur = num
    seen = []
    for _ in range(cap):
        if cur == 1:
            return True
        if cur in seen:
            return False
        seen.append(cur)
        total = 0
        for digit in digits_of(cur):
            total += digit * digit
        cur = total
    return False


assert gcd_pair(12, 18) == 6
assert gcd_pair(17, 5) == 1
assert gcd_pair(0, 7) == 7
assert lcm_pair(4, 6) == 12
assert lcm_pair(0, 9) == 0
assert gcd_many([12, 18, 24]) == 6

assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
assert primes_below(20) == [2, 3, 5, 7, 11, 13, 17, 19]
assert primes_below(2) == []
for prime in primes_below(60):
    assert is_prime(prime)

assert factorize(360) == [2, 2, 2, 3, 3, 5]
assert factorize(97) == [97]
for num in range(2, 80):
    acc = 1
    for factor in factorize(num):
        acc *= factor
    assert acc == num

assert divisor_count(12) == 6
assert divisor_count(36) == 9
assert divisor_total(12) == 28
assert is_perfect(6) and is_perfect(28)
assert not is_perfect(12)

assert digits_of(1203) == [1, 2, 0, 3]
assert digit_total(999) == 27
assert digital_root(9875) == 2
assert reverse_number(1230) == 321
assert is_palindrome_number(12321)
assert not is_palindrome_number(12312)

assert collatz_steps(1) == 0
assert collatz_steps(6) == 8
assert collatz_steps(27) == 111

assert fib_upto(13) == [0, 1, 1, 2, 3, 5, 8, 13]
assert fib_at(10) == 55
assert fib_at(0) == 0

assert power_mod(2, 10, 1000) == 24
assert power_mod(3, 0, 7) == 1
assert power_mod(10, 5, 1) == 0
for base in range(2, 9):
    assert power_mod(base, 13, 101) == base ** 13 % 101

for alpha in range(1, 15):
    for beta in range(1, 15):
        seed, coef_a, coef_b = extended_gcd(alpha, beta)
        assert seed == gcd_pair(alpha, beta)
        assert coef_a * alpha + coef_b * beta == seed

assert mod_inverse(3, 7) == 5
assert mod_inverse(4, 8) is None
for num in range(1, 11):
    inv = mod_inverse(num, 11)
    assert inv is not None and num * inv % 11 == 1

assert binomial(5, 2) == 10
assert binomial(10, 0) == 1
assert binomial(10, 11) == 0
assert binomial(52, 5) == 2598960

assert triangular(10) == 55
assert is_square(49) and is_square(0)
assert not is_square(50)

assert base_digits(255, 16) == [15, 15]
assert base_digits(0, 2) == [0]
for num in range(200):
    for base in (2, 3, 7, 16):
        assert from_base_digits(base_digits(num, base), base) == num

assert totient(1) == 1
assert totient(9) == 6
assert totient(10) == 4
assert totient(97) == 96

assert happy_steps(19, 50)
assert not happy_steps(4, 50)

print("number_theory", fib_at(20), totient(100), collatz_steps(97))
