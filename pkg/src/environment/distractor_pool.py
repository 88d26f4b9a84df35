"""
Distractor Sentence Pool
Bundled neutral English sentences appended to step descriptions, plus a file loader
"""

import logging
from pathlib import Path
from typing import Tuple

from ..exceptions import EmptyPool

logger = logging.getLogger(__name__)


DEFAULT_SENTENCES: Tuple[str, ...] = (
    "It is a nice day!",
    "The train left the station a few minutes late.",
    "She planted tomatoes along the southern fence.",
    "The committee met twice during the spring.",
    "A light rain fell over the harbor all afternoon.",
    "He read the newspaper before breakfast.",
    "The library closes early on Saturdays.",
    "Several birds gathered near the pond.",
    "The old bridge was repainted last summer.",
    "They walked slowly along the river bank.",
    "The museum added a new wing for modern sculpture.",
    "Her brother works at a bakery downtown.",
    "The orchestra tuned their instruments quietly.",
    "A cold wind blew in from the north.",
    "The children built a small fort out of blankets.",
    "The mayor spoke briefly at the opening ceremony.",
    "Coffee was served in the main hall.",
    "The farmer checked the fences every morning.",
    "A new bakery opened on the corner of the street.",
    "The meeting was postponed until next week.",
    "The lake was calm and still at dawn.",
    "He repaired the bicycle with borrowed tools.",
    "The students listened carefully to the lecture.",
    "Snow covered the hills by early December.",
    "The garden smelled of fresh lavender.",
    "She wrote a long letter to her grandmother.",
    "The ship anchored just outside the bay.",
    "A small crowd gathered to watch the parade.",
    "The doctor recommended more rest and water.",
    "The store was busy during the holiday season.",
    "He painted the kitchen a pale shade of yellow.",
    "The town council approved the new budget.",
    "The sun set behind the distant mountains.",
    "They ordered soup and bread for lunch.",
    "The clock in the hallway struck noon.",
    "The river rose after the heavy storms.",
    "Her dog waited patiently by the door.",
    "The bus route was changed in the autumn.",
    "A quiet melody drifted from the open window.",
    "The bookshop sold out of the new novel.",
    "The field was full of wildflowers in May.",
    "He learned to play the violin as a child.",
    "The road to the village was recently paved.",
    "They spent the weekend at the seaside.",
    "The librarian handed out the reading list.",
    "Fresh bread cooled on the kitchen counter.",
    "The factory hired fifty new workers.",
    "A gentle breeze moved through the trees.",
    "The concert ended with a standing ovation.",
    "She kept a diary for many years.",
    "The hikers reached the summit before noon.",
    "The restaurant serves fish every Friday.",
    "An old map hung on the classroom wall.",
    "The bakery smelled of cinnamon and sugar.",
    "The fishermen returned with a modest catch.",
    "Rain was expected later in the evening.",
    "The theater staged a comedy this season.",
    "He kept his notes in a leather folder.",
    "The price of apples rose slightly this year.",
    "A family of ducks crossed the quiet lane.",
    "The engineers inspected the new tunnel.",
    "The parade passed through the main square.",
    "The nurse checked the chart once more.",
    "They painted the fence a bright white.",
    "The river flows east toward the sea.",
    "Her cousin moved to a small coastal town.",
    "The bell rang at the end of the lesson.",
    "A red kite flew high above the park.",
    "The chef tasted the sauce and added salt.",
    "The old house had a large front porch.",
    "He caught the last train home.",
    "The museum guide spoke three languages.",
    "Tea was served with small lemon cakes.",
    "The playground was empty after the rain.",
    "The weather stayed mild through October.",
    "The pianist practiced for several hours.",
    "A stack of letters waited on the desk.",
    "The market sells fresh vegetables on Tuesdays.",
    "The team celebrated their first victory.",
    "Lanterns lit the path to the cottage.",
    "He enjoys long walks in the countryside.",
    "The carpenter measured the board twice.",
    "The harbor lights flickered in the fog.",
    "The village held a festival every summer.",
    "She sketched the cathedral from the square.",
    "The postman arrived shortly after nine.",
    "A thin layer of frost covered the grass.",
    "The professor returned the graded essays.",
    "The cat slept on the warm windowsill.",
    "The path wound gently through the forest.",
    "The company opened a second office abroad.",
    "He listened to the radio while driving.",
    "The apples in the orchard were nearly ripe.",
    "The choir rehearsed on Thursday evenings.",
    "The gallery displayed early landscape paintings.",
    "They shared a picnic beside the lake.",
    "The tailor adjusted the sleeves of the coat.",
    "A soft light filled the reading room.",
    "The festival drew visitors from nearby towns.",
    "The well in the courtyard was very deep.",
    "She answered every letter by hand.",
    "The cyclists rested at the top of the hill.",
    "The wheat fields stretched to the horizon.",
    "The old clock needed a new spring.",
    "Neighbors gathered to clear the fallen branches.",
    "The kettle whistled in the small kitchen.",
    "The lighthouse keeper wrote in his log each night.",
    "The shop on the corner sells antique maps.",
)


def load_sentence_pool(path) -> Tuple[str, ...]:
    """
    Load a newline-delimited sentence file

    Args:
        path: Path to the file; blank lines are skipped

    Returns:
        Tuple of sentences

    Raises:
        EmptyPool: If the file holds no sentences
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    sentences = tuple(line.strip() for line in lines if line.strip())
    if not sentences:
        raise EmptyPool(f"No sentences in distractor file {path}")
    logger.info(f"Loaded {len(sentences)} distractor sentences from {path}")
    return sentences
