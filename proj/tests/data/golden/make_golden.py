"""Writes the golden WAV files with Python's struct module, independently of the C++ writer."""
import math
import struct


def quantize(x):
    v = x * 32767.0
    q = math.floor(abs(v) + 0.5) * (1 if v >= 0 else -1)
    return max(-32768, min(32767, int(q)))


def wav(samples, rate):
    data = b"".join(struct.pack("<h", quantize(s)) for s in samples)
    fmt = struct.pack("<4sIHHIIHH", b"fmt ", 16, 1, 1, rate, rate * 2, 2, 16)
    return struct.pack("<4sI4s", b"RIFF", 4 + len(fmt) + 8 + len(data), b"WAVE") + fmt + struct.pack("<4sI", b"data", len(data)) + data


clips = {
    "three_samples_16k.wav": ([0.0, 0.5, -0.5], 16000),
    "empty_16k.wav": ([], 16000),
    "ramp32_8k.wav": ([-1.0 + 2.0 * i / 31 for i in range(32)], 8000),
}
for name, (samples, rate) in clips.items():
    with open(name, "wb") as f:
        f.write(wav(samples, rate))
