package test.noh;

public class ClassH {
    public void touch() {
    }
}
