package test.suite;

public class DAMCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
