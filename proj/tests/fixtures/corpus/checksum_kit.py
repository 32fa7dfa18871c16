# Toy checksums: positional digests, luhn, fletcher-style sums.

MOD = 65521


def fletcher_like(data):
    low = 1
    high = 0
    for byte in data:
        low = (low + byte) % MOD
        high = (high + low) % MOD
    return (high << 16) | low


def luhn_total(digits):
    total = 0
    flip = False
    for digit in reversed(digits):
        value = digit
        if flip:
            value *= 2
            if value > 9:
                value -= 9
        total += value
        flip = not flip
    return total


def luhn_valid(digits):
    return luhn_total(digits) % 10 == 0


def luhn_check_digit(digits):
    total = luhn_total(list(digits) + [0])
    return (10 - total % 10) % 10


def digits_from(text):
    return [int(ch) for ch in text if ch.isdigit()]


def rolling_window_sums(data, width):
    if width > len(data):
        return []
    total = 0
    for pos in range(width):
        total += data[pos]
    sums = [total]
    for pos in range(width, len(data)):
        total += data[pos] - data[pos - width]
        sums.append(total)
    return sums


def positional_digest(text):
    acc = 0
    for pos, ch in enumerate(text):
        acc = (acc + (pos + 1) * ord(ch)) % 1000000007
    return acc


def parity_byte(data):
    acc = 0
    for byte in data:
        acc ^= byte
    return acc


def crc_nibble(data):
    table = [(x * 7 + 3) % 16 for x in range(16)]
    acc = 0
    for byte in data:
        acc = table[(acc ^ (byte >> 4)) & 0xF]
        acc = table[(acc ^ (byte & 0xF)) & 0xF]
    return acc


def verify_block(data, digest):
    return fletcher_like(data) == digest


def corrupt_one(data, spot, delta):
    altered = list(data)
    altered[spot] = (altered[spot] + delta) % 256
    return altered


GOOD = [104, 101, 108, 108, 111]

digest = fletcher_like(GOOD)
assert verify_block(GOOD, digest)
assert not verify_block(corrupt_one(GOOD, 2, 1), digest)
assert fletcher_like([]) == (0 << 16) | 1
assert fletcher_like(GOOD) != fletcher_like(list(reversed(GOOD)))

assert luhn_valid(digits_from("79927398713"))
assert not luhn_valid(digits_from("79927398714"))
body = digits_from("7992739871")
check = luhn_check_digit(body)
assert check == 3
assert luhn_valid(body + [check])
for wrong in range(10):
    if wrong != check:
        assert not luhn_valid(body + [wrong])

assert rolling_window_sums([1, 2, 3, 4], 2) == [3, 5, 7]
assert rolling_window_sums([5], 2) == []
assert rolling_window_sums([2, 4, 6], 3) == [12]

assert positional_digest("ab") == ord("a") + 2 * ord("b")
assert positional_digest("ab") != positional_digest("ba")
assert positional_digest("") == 0

assert parity_byte([0b1010, 0b0110]) == 0b1100
assert parity_byte([]) == 0
assert parity_byte(GOOD + GOOD) == 0

assert crc_nibble(GOOD) == crc_nibble(list(GOOD))
assert crc_nibble(GOOD) != crc_nibble(corrupt_one(GOOD, 0, 5))
assert 0 <= crc_nibble(GOOD) < 16

print("checksum_kit", digest, positional_digest("checksum"))
