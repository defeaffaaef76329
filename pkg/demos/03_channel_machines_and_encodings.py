"""Channel machines and their timed-word encodings.

A channel machine writes to and reads from an unbounded fifo queue.  An
error-free computation can be displayed as a timed word: one block of two
time units per configuration, the queue content shown as message symbols
padded with hashes at fixed fractional offsets, every symbol recurring
exactly two time units later (shifted left on a successful read).
Crucially, the display tolerates extra inserted symbols, which is what the
companion automaton exists to rule out.
"""

from fractions import Fraction

from ptamtl import (
    ChannelMachine,
    check_membership,
    decode,
    decompose,
    default_layout,
    encode,
    frac_alignment,
    inject_insertion,
    max_width,
    search_error_free,
    step_insertion,
)
from ptamtl.channel import Configuration
from ptamtl.formats import serialize_computation, serialize_timed_word

machine = ChannelMachine(
    states=("idle", "sent", "done"),
    initial="idle",
    messages=("job",),
    transitions=(("idle", "job!", "sent"), ("sent", "job?", "done")),
)

result = search_error_free(machine, "done", max_steps=6, max_channel_len=3)
gamma = result.computation
print("shortest error-free computation:", serialize_computation(gamma))

word = encode(machine, "done", gamma, default_layout(1))
print("encoded:", serialize_timed_word(word))
print("blocks: ", [(b.state, [s for s, _ in b.symbols], b.trailer) for b in decompose(word, machine)])
print("member of the encoding language at width 1:", check_membership(word, machine, "done", 1))
print("decodes back to the same computation:", decode(word, machine, "done") == gamma)

# fractional offsets survive from each block to the next
print("offset-survival maps:", frac_alignment(word, machine))

# the faulty step relation tolerates insertions; here a read happens even
# though the queue display was empty
print(
    "\nread from an empty queue is a faulty step:",
    step_insertion(machine, Configuration("sent"), "job?", Configuration("done")),
)

# injecting a stray hash keeps the word in the language but widens a block
mutated = inject_insertion(word, machine, block_index=2, offset=Fraction(17, 20))
print("\ninjected:", serialize_timed_word(mutated))
print("still a member:", check_membership(mutated, machine, "done", 1))
print("widest block grew to:", max_width(mutated, machine))
try:
    decode(mutated, machine, "done")
except Exception as error:
    print("decoding refuses:", error)
